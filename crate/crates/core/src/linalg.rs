//! Bipartite operator algebra: composite indexing, the local projections
//! Â_a = ⟨a|Â|a⟩ and Â_b = ⟨b|Â|b⟩, and partial transposition.
//!
//! The composite index is row-major in the B factor: |e_p, f_q⟩ sits at
//! p·d_b + q. With this convention the coefficient matrix M̂ of a pure state
//! is a plain reshape of its amplitude vector.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Error;
use crate::{tol, Result};

/// Factor dimensions (d_a, d_b) of H_A ⊗ H_B.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Dims {
    d_a: usize,
    d_b: usize,
}

impl Dims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 {
            return Err(Error::dims(format!(
                "factor dimensions must be positive, got {d_a}x{d_b}"
            )));
        }
        Ok(Dims { d_a, d_b })
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    /// Side of the composite matrices, d_a·d_b.
    pub fn total(&self) -> usize {
        self.d_a * self.d_b
    }

    /// Composite index of |e_p, f_q⟩.
    pub fn composite(&self, p: usize, q: usize) -> usize {
        debug_assert!(p < self.d_a && q < self.d_b);
        p * self.d_b + q
    }
}

impl std::fmt::Display for Dims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.d_a, self.d_b)
    }
}

/// Which tensor factor a local vector lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Side {
    A,
    B,
}

/// Normalized vector on one factor, with the global phase fixed so that the
/// first nonzero coefficient is real and non-negative. The canonical phase
/// makes solver outputs comparable across runs.
#[derive(Debug, Clone)]
pub struct LocalVector {
    side: Side,
    coeffs: DVector<Complex64>,
}

impl LocalVector {
    /// Normalize and phase-fix. Fails with `NullState` for an all-zero input.
    pub fn new(side: Side, coeffs: DVector<Complex64>) -> Result<Self> {
        let mut v = Self::with_phase(side, coeffs)?;
        v.fix_phase();
        Ok(v)
    }

    /// Normalize but keep the incoming phase. Schmidt left vectors carry a
    /// per-term phase that must not be canonicalized away.
    pub fn with_phase(side: Side, coeffs: DVector<Complex64>) -> Result<Self> {
        let norm = coeffs.norm();
        if !norm.is_finite() {
            return Err(Error::InvalidParam("non-finite vector".into()));
        }
        if norm < tol::UNIT_NORM {
            return Err(Error::NullState);
        }
        Ok(LocalVector {
            side,
            coeffs: coeffs / Complex64::new(norm, 0.0),
        })
    }

    /// k-th basis vector |e_k⟩ (or |f_k⟩).
    pub fn basis_state(side: Side, dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dim {dim}");
        let mut coeffs = DVector::zeros(dim);
        coeffs[k] = Complex64::new(1.0, 0.0);
        LocalVector { side, coeffs }
    }

    /// Haar-random unit vector with seeded randomness.
    pub fn random<R: Rng + ?Sized>(side: Side, dim: usize, rng: &mut R) -> Self {
        loop {
            let coeffs = DVector::from_fn(dim, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            if let Ok(v) = Self::new(side, coeffs) {
                return v;
            }
        }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &DVector<Complex64> {
        &self.coeffs
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &LocalVector) -> Complex64 {
        self.coeffs.dotc(&other.coeffs)
    }

    /// Entrywise complex conjugate (used by the partial-transpose identity
    /// g(a, b) = g_PT(a, b*)).
    pub fn conj(&self) -> LocalVector {
        LocalVector {
            side: self.side,
            coeffs: self.coeffs.map(|c| c.conj()),
        }
    }

    /// True when the two vectors agree up to a global phase within `tol`.
    pub fn matches_up_to_phase(&self, other: &LocalVector, tol: f64) -> bool {
        self.dim() == other.dim() && 1.0 - self.overlap(other).norm() < tol
    }

    fn fix_phase(&mut self) {
        let lead = self.coeffs.iter().find(|c| c.norm() > tol::UNIT_NORM);
        if let Some(&c) = lead {
            let phase = c / Complex64::new(c.norm(), 0.0);
            self.coeffs /= phase;
        }
    }
}

impl serde::Serialize for LocalVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in self.coeffs.iter() {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

/// Dense Hermitian operator on H_A ⊗ H_B.
///
/// Construction symmetrizes (M + M†)/2 when the asymmetry is below
/// `tol::HERMITICITY_REJECT` and rejects the input otherwise, so stored
/// entries are Hermitian exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteOperator {
    dims: Dims,
    entries: DMatrix<Complex64>,
}

impl BipartiteOperator {
    pub fn new(dims: Dims, entries: DMatrix<Complex64>) -> Result<Self> {
        let n = dims.total();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::dims(format!(
                "operator must be {n}x{n} for dims {dims}, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if entries.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParam("non-finite operator entry".into()));
        }
        let asymmetry = (&entries - entries.adjoint()).max_modulus();
        if asymmetry >= tol::HERMITICITY_REJECT {
            return Err(Error::NonHermitian {
                asymmetry,
                limit: tol::HERMITICITY_REJECT,
            });
        }
        let entries = (&entries + entries.adjoint()).scale(0.5);
        Ok(BipartiteOperator { dims, entries })
    }

    /// Identity on the composite space.
    pub fn identity(dims: Dims) -> Self {
        BipartiteOperator {
            dims,
            entries: DMatrix::identity(dims.total(), dims.total()),
        }
    }

    /// Random Hermitian operator with standard-normal entries, symmetrized.
    pub fn random_hermitian(dims: Dims, seed: u64) -> Self {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
        let n = dims.total();
        let m = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        });
        let entries = (&m + m.adjoint()).scale(0.5);
        BipartiteOperator { dims, entries }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Â_a = tr_A[Â (|a⟩⟨a| ⊗ 1̂_B)] = ⟨a|Â|a⟩, an operator on H_B.
    pub fn project_a(&self, a: &LocalVector) -> Result<DMatrix<Complex64>> {
        self.check_local(a, Side::A)?;
        let (d_a, d_b) = (self.dims.d_a, self.dims.d_b);
        let mut out = DMatrix::zeros(d_b, d_b);
        for p in 0..d_a {
            let ap = a.coeffs[p].conj();
            if ap.norm_sqr() == 0.0 {
                continue;
            }
            for r in 0..d_a {
                let w = ap * a.coeffs[r];
                if w.norm_sqr() == 0.0 {
                    continue;
                }
                let block = self
                    .entries
                    .view((p * d_b, r * d_b), (d_b, d_b));
                out += block * w;
            }
        }
        Ok(out)
    }

    /// Â_b = tr_B[Â (1̂_A ⊗ |b⟩⟨b|)] = ⟨b|Â|b⟩, an operator on H_A.
    pub fn project_b(&self, b: &LocalVector) -> Result<DMatrix<Complex64>> {
        self.check_local(b, Side::B)?;
        let (d_a, d_b) = (self.dims.d_a, self.dims.d_b);
        let mut out = DMatrix::zeros(d_a, d_a);
        for p in 0..d_a {
            for r in 0..d_a {
                let mut acc = Complex64::default();
                for q in 0..d_b {
                    let bq = b.coeffs[q].conj();
                    if bq.norm_sqr() == 0.0 {
                        continue;
                    }
                    for s in 0..d_b {
                        acc += bq * self.entries[(p * d_b + q, r * d_b + s)] * b.coeffs[s];
                    }
                }
                out[(p, r)] = acc;
            }
        }
        Ok(out)
    }

    /// Transpose on the B factor: A'_{pq,rs} = A_{ps,rq}. An exact involution.
    pub fn partial_transpose(&self) -> BipartiteOperator {
        let (d_a, d_b) = (self.dims.d_a, self.dims.d_b);
        let mut out = DMatrix::zeros(self.entries.nrows(), self.entries.ncols());
        for p in 0..d_a {
            for q in 0..d_b {
                for r in 0..d_a {
                    for s in 0..d_b {
                        out[(p * d_b + q, r * d_b + s)] =
                            self.entries[(p * d_b + s, r * d_b + q)];
                    }
                }
            }
        }
        BipartiteOperator {
            dims: self.dims,
            entries: out,
        }
    }

    /// tr(ϱ·Â). The imaginary residue must stay below `tol::IMAG_RESIDUE`.
    pub fn expectation(&self, rho: &DensityOperator) -> Result<f64> {
        if rho.op().dims != self.dims {
            return Err(Error::dims(format!(
                "operator dims {} vs state dims {}",
                self.dims,
                rho.op().dims
            )));
        }
        let mut acc = Complex64::default();
        let n = self.dims.total();
        for i in 0..n {
            for k in 0..n {
                acc += rho.op().entries[(i, k)] * self.entries[(k, i)];
            }
        }
        if acc.im.abs() >= tol::IMAG_RESIDUE {
            return Err(Error::NonHermitian {
                asymmetry: acc.im.abs(),
                limit: tol::IMAG_RESIDUE,
            });
        }
        Ok(acc.re)
    }

    /// g(a, b) = ⟨a,b|Â|a,b⟩.
    pub fn product_value(&self, a: &LocalVector, b: &LocalVector) -> Result<f64> {
        self.check_local(a, Side::A)?;
        self.check_local(b, Side::B)?;
        let v = kron_vec(a.coeffs(), b.coeffs());
        let w = &self.entries * &v;
        let acc = v.dotc(&w);
        if acc.im.abs() >= tol::IMAG_RESIDUE {
            return Err(Error::NonHermitian {
                asymmetry: acc.im.abs(),
                limit: tol::IMAG_RESIDUE,
            });
        }
        Ok(acc.re)
    }

    /// Real trace (the diagonal of a Hermitian matrix is real).
    pub fn trace(&self) -> f64 {
        self.entries.diagonal().iter().map(|c| c.re).sum()
    }

    /// Eigenvalues sorted ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.entries).0
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Spectral norm sup{|w| : w eigenvalue}.
    pub fn spectral_norm(&self) -> f64 {
        let eigs = self.eigenvalues();
        eigs[0].abs().max(eigs[eigs.len() - 1].abs())
    }

    /// Largest |entry|; the grid norm ‖Â‖_max.
    pub fn max_norm(&self) -> f64 {
        self.entries.max_modulus()
    }

    /// Â + κ·1̂.
    pub fn shift(&self, kappa: f64) -> BipartiteOperator {
        let mut entries = self.entries.clone();
        for i in 0..entries.nrows() {
            entries[(i, i)] += Complex64::new(kappa, 0.0);
        }
        BipartiteOperator {
            dims: self.dims,
            entries,
        }
    }

    /// γ·Â.
    pub fn scale(&self, gamma: f64) -> BipartiteOperator {
        BipartiteOperator {
            dims: self.dims,
            entries: self.entries.scale(gamma),
        }
    }

    /// Zero-pad into a larger space; entries act on the low-index levels of
    /// each factor and vanish elsewhere.
    pub fn embed(&self, target: Dims) -> Result<BipartiteOperator> {
        if target.d_a < self.dims.d_a || target.d_b < self.dims.d_b {
            return Err(Error::dims(format!(
                "cannot embed {} into smaller {}",
                self.dims, target
            )));
        }
        let mut entries = DMatrix::zeros(target.total(), target.total());
        for p in 0..self.dims.d_a {
            for q in 0..self.dims.d_b {
                for r in 0..self.dims.d_a {
                    for s in 0..self.dims.d_b {
                        entries[(p * target.d_b + q, r * target.d_b + s)] =
                            self.entries[(self.dims.composite(p, q), self.dims.composite(r, s))];
                    }
                }
            }
        }
        Ok(BipartiteOperator {
            dims: target,
            entries,
        })
    }

    fn check_local(&self, v: &LocalVector, expect: Side) -> Result<()> {
        let want = match expect {
            Side::A => self.dims.d_a,
            Side::B => self.dims.d_b,
        };
        if v.side() != expect || v.dim() != want {
            return Err(Error::dims(format!(
                "local vector must live on side {:?} with dim {want}, got {:?} dim {}",
                expect,
                v.side(),
                v.dim()
            )));
        }
        Ok(())
    }
}

impl std::ops::Add for &BipartiteOperator {
    type Output = BipartiteOperator;
    fn add(self, rhs: &BipartiteOperator) -> BipartiteOperator {
        assert_eq!(self.dims, rhs.dims, "operator dims mismatch");
        BipartiteOperator {
            dims: self.dims,
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl std::ops::Sub for &BipartiteOperator {
    type Output = BipartiteOperator;
    fn sub(self, rhs: &BipartiteOperator) -> BipartiteOperator {
        assert_eq!(self.dims, rhs.dims, "operator dims mismatch");
        BipartiteOperator {
            dims: self.dims,
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl std::ops::Neg for &BipartiteOperator {
    type Output = BipartiteOperator;
    fn neg(self) -> BipartiteOperator {
        self.scale(-1.0)
    }
}

/// Normalized pure state on the composite space.
#[derive(Debug, Clone)]
pub struct PureBipartiteState {
    dims: Dims,
    amplitudes: DVector<Complex64>,
}

impl PureBipartiteState {
    pub fn new(dims: Dims, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::dims(format!(
                "state vector must have length {} for dims {dims}, got {}",
                dims.total(),
                amplitudes.len()
            )));
        }
        if amplitudes
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::InvalidParam("non-finite amplitude".into()));
        }
        let norm = amplitudes.norm();
        if norm < tol::UNIT_NORM {
            return Err(Error::NullState);
        }
        Ok(PureBipartiteState {
            dims,
            amplitudes: amplitudes / Complex64::new(norm, 0.0),
        })
    }

    /// Product state |a⟩ ⊗ |b⟩.
    pub fn product(a: &LocalVector, b: &LocalVector) -> Self {
        PureBipartiteState {
            dims: Dims {
                d_a: a.dim(),
                d_b: b.dim(),
            },
            amplitudes: kron_vec(a.coeffs(), b.coeffs()),
        }
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// Coefficient-matrix view M̂: the d_a × d_b reshape with
    /// M[i, j] = ψ_{i,j}.
    pub fn coefficient_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dims.d_a, self.dims.d_b, |i, j| {
            self.amplitudes[self.dims.composite(i, j)]
        })
    }

    /// Rank-one projector |ψ⟩⟨ψ|.
    pub fn projector(&self) -> BipartiteOperator {
        let n = self.dims.total();
        let entries = DMatrix::from_fn(n, n, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        BipartiteOperator {
            dims: self.dims,
            entries,
        }
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureBipartiteState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Zero-pad into a larger space, occupying the low-index levels.
    pub fn embed(&self, target: Dims) -> Result<PureBipartiteState> {
        if target.d_a < self.dims.d_a || target.d_b < self.dims.d_b {
            return Err(Error::dims(format!(
                "cannot embed {} into smaller {}",
                self.dims, target
            )));
        }
        let mut amplitudes = DVector::zeros(target.total());
        for p in 0..self.dims.d_a {
            for q in 0..self.dims.d_b {
                amplitudes[p * target.d_b + q] = self.amplitudes[self.dims.composite(p, q)];
            }
        }
        Ok(PureBipartiteState {
            dims: target,
            amplitudes,
        })
    }
}

impl serde::Serialize for PureBipartiteState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.amplitudes.len()))?;
        for c in self.amplitudes.iter() {
            seq.serialize_element(&[c.re, c.im])?;
        }
        seq.end()
    }
}

/// Trace-one positive-semidefinite operator.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    op: BipartiteOperator,
}

impl DensityOperator {
    pub fn new(op: BipartiteOperator) -> Result<Self> {
        let tr = op.trace();
        if (tr - 1.0).abs() >= tol::TRACE_ONE {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let min_eig = op.min_eigenvalue();
        if min_eig < tol::PSD_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(DensityOperator { op })
    }

    /// ϱ = |ψ⟩⟨ψ|.
    pub fn from_pure(psi: &PureBipartiteState) -> Self {
        DensityOperator {
            op: psi.projector(),
        }
    }

    /// Convex mixture Σ wᵢ ϱᵢ; weights are normalized to sum to one.
    pub fn mixture(parts: &[(f64, DensityOperator)]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidParam("empty mixture".into()));
        }
        let dims = parts[0].1.op.dims;
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if total <= 0.0 || parts.iter().any(|(w, _)| *w < 0.0) {
            return Err(Error::InvalidParam("mixture weights must be >= 0".into()));
        }
        let mut entries = DMatrix::zeros(dims.total(), dims.total());
        for (w, rho) in parts {
            if rho.op.dims != dims {
                return Err(Error::dims("mixture parts have different dims"));
            }
            entries += rho.op.entries.scale(w / total);
        }
        Ok(DensityOperator {
            op: BipartiteOperator { dims, entries },
        })
    }

    pub fn op(&self) -> &BipartiteOperator {
        &self.op
    }

    pub fn dims(&self) -> Dims {
        self.op.dims
    }

    /// ϱ^PT as a plain Hermitian operator (it may fail positivity).
    pub fn partial_transpose(&self) -> BipartiteOperator {
        self.op.partial_transpose()
    }
}

/// Kronecker product of two vectors with the composite index convention.
pub fn kron_vec(a: &DVector<Complex64>, b: &DVector<Complex64>) -> DVector<Complex64> {
    let (n_a, n_b) = (a.len(), b.len());
    DVector::from_fn(n_a * n_b, |i, _| a[i / n_b] * b[i % n_b])
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted ascending
/// with eigenvector columns permuted to match.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let se = m.clone().symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| se.eigenvalues[i].total_cmp(&se.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &se.eigenvectors.column(i));
    }
    (eigenvalues, vectors)
}

/// Orthonormal basis whose first column is `v` (assumed unit norm); the rest
/// comes from Gram-Schmidt over the standard basis.
pub fn orthonormal_extension(v: &DVector<Complex64>) -> DMatrix<Complex64> {
    let n = v.len();
    let mut cols: Vec<DVector<Complex64>> = vec![v.clone()];
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut cand = DVector::zeros(n);
        cand[k] = Complex64::new(1.0, 0.0);
        for c in &cols {
            let ov = c.dotc(&cand);
            cand -= c * ov;
        }
        let norm = cand.norm();
        if norm > 1e-8 {
            cols.push(cand / Complex64::new(norm, 0.0));
        }
    }
    assert_eq!(cols.len(), n, "failed to extend to a full basis");
    DMatrix::from_columns(&cols)
}

pub(crate) trait MaxModulus {
    fn max_modulus(&self) -> f64;
}

impl MaxModulus for DMatrix<Complex64> {
    /// Largest entry modulus. Distinct from nalgebra's `camax`, which ranks
    /// entries by |re| + |im|.
    fn max_modulus(&self) -> f64 {
        self.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}
