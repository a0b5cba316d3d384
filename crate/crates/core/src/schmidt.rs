//! Schmidt decomposition through the coefficient matrix.
//!
//! Reshaping the amplitudes of |ψ⟩ into M̂ (d_a × d_b) turns the separability
//! eigenvalue equations of the projector |ψ⟩⟨ψ| into the ordinary eigenvalue
//! problems M̂M̂†|a⟩ = g|a⟩ and M̂†M̂|b⟩ = g|b⟩, i.e. into a singular value
//! decomposition: |ψ⟩ = Σ_q |m_q| |a_q', b_q⟩ with |m_q| the singular values
//! of M̂.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::linalg::{LocalVector, PureBipartiteState, Side};
use crate::{tol, Result};

/// |ψ⟩ = Σ_q coefficients[q] · |left[q], right[q]⟩ with coefficients sorted
/// non-increasing.
///
/// Right vectors are phase-canonical; left vectors carry the per-term phase
/// (the primed |a_q'⟩), so the reconstruction matches the input without any
/// per-term phase freedom.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<LocalVector>,
    pub right_vectors: Vec<LocalVector>,
}

impl SchmidtDecomposition {
    /// Number of coefficients above the rank tolerance.
    pub fn rank(&self) -> usize {
        self.coefficients
            .iter()
            .filter(|m| **m > tol::SCHMIDT_RANK)
            .count()
    }

    /// Σ_q coefficients[q] · |left[q]⟩ ⊗ |right[q]⟩.
    pub fn reconstruct(&self) -> DVector<Complex64> {
        let d_a = self.left_vectors[0].dim();
        let d_b = self.right_vectors[0].dim();
        let mut out = DVector::zeros(d_a * d_b);
        for ((m, a), b) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            let term = crate::linalg::kron_vec(a.coeffs(), b.coeffs());
            out += term * Complex64::new(*m, 0.0);
        }
        out
    }
}

/// Schmidt decomposition of a pure state via SVD of its coefficient matrix.
///
/// Singular values are reported for the full min(d_a, d_b) index set
/// (including zeros), sorted descending; ties are ordered deterministically
/// by the phase-fixed right vectors.
pub fn schmidt(psi: &PureBipartiteState) -> SchmidtDecomposition {
    let m = psi.coefficient_matrix();
    let svd = m.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u requested");
    let v_t = svd.v_t.as_ref().expect("svd with v_t requested");
    let k = svd.singular_values.len();

    // M = UΣV†, so ψ = Σ_q σ_q |u_q⟩ ⊗ |v̄_q⟩: the B-side Schmidt vector is
    // the conjugated right-singular vector, i.e. the transposed row of V†
    let mut terms: Vec<(f64, DVector<Complex64>, DVector<Complex64>)> = (0..k)
        .map(|q| {
            (
                svd.singular_values[q],
                u.column(q).clone_owned(),
                v_t.row(q).transpose(),
            )
        })
        .collect();

    // descending singular values; degenerate groups ordered by the
    // lexicographic key of the phase-fixed right vector
    terms.sort_by(|x, y| {
        y.0.total_cmp(&x.0)
            .then_with(|| lex_key(&y.2).partial_cmp(&lex_key(&x.2)).unwrap().reverse())
    });

    let mut coefficients = Vec::with_capacity(k);
    let mut left_vectors = Vec::with_capacity(k);
    let mut right_vectors = Vec::with_capacity(k);
    for (s, a_raw, b_raw) in terms {
        // canonicalize the right vector, fold its phase (and any SVD phase)
        // into the left one so each term is reproduced exactly
        let b = LocalVector::new(Side::B, b_raw.clone()).expect("svd column has unit norm");
        let phase_b = dominant_phase(&b_raw);
        let a = LocalVector::with_phase(Side::A, a_raw * phase_b)
            .expect("svd column has unit norm");
        coefficients.push(s.max(0.0));
        left_vectors.push(a);
        right_vectors.push(b);
    }

    SchmidtDecomposition {
        coefficients,
        left_vectors,
        right_vectors,
    }
}

/// Number of Schmidt coefficients above `tol::SCHMIDT_RANK`; 1 means a
/// product state.
pub fn schmidt_rank(psi: &PureBipartiteState) -> usize {
    schmidt(psi).rank()
}

/// Phase of the first significant coefficient; canonicalizing b by this is
/// compensated by multiplying a with it.
fn dominant_phase(v: &DVector<Complex64>) -> Complex64 {
    v.iter()
        .find(|c| c.norm() > tol::UNIT_NORM)
        .map(|c| c / Complex64::new(c.norm(), 0.0))
        .unwrap_or_else(|| Complex64::new(1.0, 0.0))
}

fn lex_key(v: &DVector<Complex64>) -> Vec<f64> {
    let phase = dominant_phase(v);
    v.iter()
        .flat_map(|c| {
            let w = c / phase;
            [w.re, w.im]
        })
        .collect()
}

/// Decompose, or fail with `NullState` before normalization can hide it.
/// (`PureBipartiteState` cannot hold a zero vector, so this is a convenience
/// for callers holding raw amplitudes.)
pub fn schmidt_of_amplitudes(
    dims: crate::linalg::Dims,
    amplitudes: DVector<Complex64>,
) -> Result<SchmidtDecomposition> {
    let psi = PureBipartiteState::new(dims, amplitudes)?;
    Ok(schmidt(&psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Dims;
    use crate::states::bell_phi;
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn diag_state(theta: f64) -> PureBipartiteState {
        let dims = Dims::new(2, 2).unwrap();
        let mut amps = DVector::zeros(4);
        amps[0] = c(theta.cos(), 0.0);
        amps[3] = c(theta.sin(), 0.0);
        PureBipartiteState::new(dims, amps).unwrap()
    }

    #[test]
    fn product_state_has_single_coefficient() {
        let dims = Dims::new(2, 2).unwrap();
        let mut amps = DVector::zeros(4);
        amps[0] = c(1.0, 0.0);
        let psi = PureBipartiteState::new(dims, amps).unwrap();
        let sd = schmidt(&psi);
        assert_abs_diff_eq!(sd.coefficients[0], 1.0, epsilon = 1e-12);
        assert_eq!(sd.rank(), 1);
        assert_eq!(schmidt_rank(&psi), 1);
    }

    #[test]
    fn bell_state_has_two_equal_coefficients() {
        let sd = schmidt(&bell_phi());
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(sd.coefficients[0], inv_sqrt2, epsilon = 1e-12);
        assert_abs_diff_eq!(sd.coefficients[1], inv_sqrt2, epsilon = 1e-12);
        assert_eq!(sd.rank(), 2);
    }

    #[test]
    fn already_diagonal_state() {
        let sd = schmidt(&diag_state(0.3));
        assert_abs_diff_eq!(sd.coefficients[0], 0.3f64.cos(), epsilon = 1e-12);
        assert_abs_diff_eq!(sd.coefficients[1], 0.3f64.sin(), epsilon = 1e-12);
    }

    #[test]
    fn tiny_coefficient_below_rank_tolerance() {
        assert_eq!(schmidt_rank(&diag_state(1e-12)), 1);
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        use rand::SeedableRng;
        use rand_distr::StandardNormal;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        for &(da, db) in &[(2usize, 2usize), (3, 3), (2, 4), (4, 3)] {
            let dims = Dims::new(da, db).unwrap();
            let amps = DVector::from_fn(dims.total(), |_, _| {
                use rand::Rng;
                c(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let psi = PureBipartiteState::new(dims, amps).unwrap();
            let sd = schmidt(&psi);

            // weights sum to one
            let sum: f64 = sd.coefficients.iter().map(|m| m * m).sum();
            assert_abs_diff_eq!(sum, 1.0, epsilon = 1e-10);
            // non-increasing
            for w in sd.coefficients.windows(2) {
                assert!(w[0] >= w[1] - 1e-12);
            }
            // orthonormal factors
            for i in 0..sd.left_vectors.len() {
                for j in 0..sd.left_vectors.len() {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert_abs_diff_eq!(
                        sd.left_vectors[i].overlap(&sd.left_vectors[j]).norm(),
                        expect,
                        epsilon = 1e-10
                    );
                    assert_abs_diff_eq!(
                        sd.right_vectors[i].overlap(&sd.right_vectors[j]).norm(),
                        expect,
                        epsilon = 1e-10
                    );
                }
            }
            // reconstruction up to a global phase
            let rec = sd.reconstruct();
            let overlap = rec.dotc(psi.amplitudes()).norm();
            assert_abs_diff_eq!(overlap, 1.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn local_unitary_invariance() {
        use rand::Rng;
        use rand::SeedableRng;
        use rand_distr::StandardNormal;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let dims = Dims::new(3, 3).unwrap();

        let haar_unitary = |rng: &mut rand_chacha::ChaCha12Rng, n: usize| {
            let m = DMatrix::from_fn(n, n, |_, _| {
                c(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let qr = m.qr();
            qr.q()
        };

        for _ in 0..5 {
            let amps = DVector::from_fn(9, |_, _| {
                c(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let psi = PureBipartiteState::new(dims, amps).unwrap();
            let u_a = haar_unitary(&mut rng, 3);
            let u_b = haar_unitary(&mut rng, 3);

            let mut rotated = DVector::zeros(9);
            let m = psi.coefficient_matrix();
            let m2 = &u_a * m * u_b.transpose();
            for i in 0..3 {
                for j in 0..3 {
                    rotated[dims.composite(i, j)] = m2[(i, j)];
                }
            }
            let psi2 = PureBipartiteState::new(dims, rotated).unwrap();

            let c1 = schmidt(&psi).coefficients;
            let c2 = schmidt(&psi2).coefficients;
            for (x, y) in c1.iter().zip(&c2) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-10);
            }
        }
    }
}
