//! Example states and fixtures: Bell states, the coherent-superposition
//! mixture in a truncated Fock space, Werner states, seeded random product
//! and separable states, and the 3 ⊗ 3 tiles state.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::Error;
use crate::linalg::{BipartiteOperator, DensityOperator, Dims, LocalVector, PureBipartiteState, Side};
use crate::solver::derive_seed;
use crate::Result;

/// |Φ⟩ = (|0,1⟩ + |1,0⟩)/√2.
pub fn bell_phi() -> PureBipartiteState {
    let dims = Dims::new(2, 2).unwrap();
    let mut amps = DVector::zeros(4);
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[dims.composite(0, 1)] = w;
    amps[dims.composite(1, 0)] = w;
    PureBipartiteState::new(dims, amps).unwrap()
}

/// |Φ⁺⟩ = (|0,0⟩ + |1,1⟩)/√2.
pub fn bell_phi_plus() -> PureBipartiteState {
    let dims = Dims::new(2, 2).unwrap();
    let mut amps = DVector::zeros(4);
    let w = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[dims.composite(0, 0)] = w;
    amps[dims.composite(1, 1)] = w;
    PureBipartiteState::new(dims, amps).unwrap()
}

/// Fock-space cutoff for the continuous-variable constructions: levels
/// 0..=n_max per mode, with a bound on the discarded coherent-state tail.
#[derive(Debug, Clone, Copy)]
pub struct FockTruncation {
    pub n_max: usize,
    pub tail_mass_tol: f64,
}

impl Default for FockTruncation {
    fn default() -> Self {
        FockTruncation {
            n_max: 12,
            tail_mass_tol: 1e-10,
        }
    }
}

impl FockTruncation {
    pub fn new(n_max: usize, tail_mass_tol: f64) -> Result<Self> {
        if n_max == 0 {
            return Err(Error::InvalidParam("n_max must be >= 1".into()));
        }
        if !(tail_mass_tol > 0.0) {
            return Err(Error::InvalidParam("tail_mass_tol must be > 0".into()));
        }
        Ok(FockTruncation {
            n_max,
            tail_mass_tol,
        })
    }

    /// Dimension of one truncated mode.
    pub fn levels(&self) -> usize {
        self.n_max + 1
    }

    /// Two truncated modes as a bipartite space.
    pub fn dims(&self) -> Dims {
        Dims::new(self.levels(), self.levels()).unwrap()
    }
}

/// Fock amplitudes c_n = e^{−|α|²/2} αⁿ/√n! of a coherent state, truncated.
/// Fails when the discarded mass Σ_{n>n_max} |c_n|² exceeds the tolerance.
pub fn coherent_amplitudes(alpha: Complex64, trunc: FockTruncation) -> Result<DVector<Complex64>> {
    let n = trunc.levels();
    let mut amps = DVector::zeros(n);
    let prefactor = (-alpha.norm_sqr() / 2.0).exp();
    let mut term = Complex64::new(prefactor, 0.0);
    amps[0] = term;
    for k in 1..n {
        term *= alpha / Complex64::new((k as f64).sqrt(), 0.0);
        amps[k] = term;
    }
    let kept: f64 = amps.iter().map(|c| c.norm_sqr()).sum();
    let tail = (1.0 - kept).max(0.0);
    if tail >= trunc.tail_mass_tol {
        return Err(Error::TailMass {
            mass: tail,
            limit: trunc.tail_mass_tol,
        });
    }
    Ok(amps)
}

/// Truncated odd coherent superposition with its normalization bookkeeping.
#[derive(Debug, Clone)]
pub struct ChiMinus {
    pub state: PureBipartiteState,
    /// The analytic constant N = [2(1 − e^{−2(|α|²+|β|²)})]^{−1/2}.
    pub analytic_normalization: f64,
    /// |‖N·(truncated amplitudes)‖ − 1|: how much mass the cutoff removed.
    pub renormalization_drift: f64,
}

/// |χ₋⟩ = N(|α,β⟩ − |−α,−β⟩) on the truncated two-mode space. Only odd total
/// photon numbers survive the antisymmetric combination.
pub fn chi_minus(alpha: Complex64, beta: Complex64, trunc: FockTruncation) -> Result<ChiMinus> {
    if alpha.norm_sqr() + beta.norm_sqr() == 0.0 {
        return Err(Error::NullState);
    }
    let ca = coherent_amplitudes(alpha, trunc)?;
    let cb = coherent_amplitudes(beta, trunc)?;
    let ca_neg = coherent_amplitudes(-alpha, trunc)?;
    let cb_neg = coherent_amplitudes(-beta, trunc)?;

    let s = alpha.norm_sqr() + beta.norm_sqr();
    let analytic_n = (2.0 * (1.0 - (-2.0 * s).exp())).powf(-0.5);

    let dims = trunc.dims();
    let mut amps = DVector::zeros(dims.total());
    for m in 0..trunc.levels() {
        for n in 0..trunc.levels() {
            amps[dims.composite(m, n)] =
                (ca[m] * cb[n] - ca_neg[m] * cb_neg[n]) * analytic_n;
        }
    }
    let drift = (amps.norm() - 1.0).abs();
    let state = PureBipartiteState::new(dims, amps)?;
    Ok(ChiMinus {
        state,
        analytic_normalization: analytic_n,
        renormalization_drift: drift,
    })
}

/// ϱ_mix = η|χ₋⟩⟨χ₋| + (1−η)|0,0⟩⟨0,0| on the truncated space.
pub fn rho_mix(
    alpha: Complex64,
    beta: Complex64,
    eta: f64,
    trunc: FockTruncation,
) -> Result<DensityOperator> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParam(format!("eta must lie in (0,1), got {eta}")));
    }
    let chi = chi_minus(alpha, beta, trunc)?;
    let dims = trunc.dims();
    let mut vacuum_amps = DVector::zeros(dims.total());
    vacuum_amps[0] = Complex64::new(1.0, 0.0);
    let vacuum = PureBipartiteState::new(dims, vacuum_amps)?;
    DensityOperator::mixture(&[
        (eta, DensityOperator::from_pure(&chi.state)),
        (1.0 - eta, DensityOperator::from_pure(&vacuum)),
    ])
}

/// Detection threshold of ϱ_mix under the Bell projector test:
/// η > sinh(|α|² + |β|²) / |α + β|².
pub fn chi_mix_threshold(alpha: Complex64, beta: Complex64) -> f64 {
    let s = alpha.norm_sqr() + beta.norm_sqr();
    s.sinh() / (alpha + beta).norm_sqr()
}

/// Werner state p|Φ⁺⟩⟨Φ⁺| + (1−p)·1̂/4.
pub fn werner(p: f64) -> Result<DensityOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p must lie in [0,1], got {p}")));
    }
    let dims = Dims::new(2, 2).unwrap();
    let bell = bell_phi_plus().projector();
    let mixed = BipartiteOperator::identity(dims).scale(0.25);
    let entries = bell.entries().scale(p) + mixed.entries().scale(1.0 - p);
    DensityOperator::new(BipartiteOperator::new(dims, entries)?)
}

/// Haar-random product state, deterministic per seed.
pub fn random_product(dims: Dims, seed: u64) -> PureBipartiteState {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 0x70726f64));
    let a = LocalVector::random(Side::A, dims.d_a(), &mut rng);
    let b = LocalVector::random(Side::B, dims.d_b(), &mut rng);
    PureBipartiteState::product(&a, &b)
}

/// Dirichlet-weighted mixture of Haar-random product projectors: a sample
/// from the interior of the separable set, deterministic per seed.
pub fn random_separable(dims: Dims, terms: usize, seed: u64) -> Result<DensityOperator> {
    if terms == 0 {
        return Err(Error::InvalidParam("terms must be >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 0x736570));
    let mut parts = Vec::with_capacity(terms);
    for _ in 0..terms {
        // flat Dirichlet via normalized exponentials
        let u: f64 = rng.random();
        let w = -(1.0 - u).ln();
        let a = LocalVector::random(Side::A, dims.d_a(), &mut rng);
        let b = LocalVector::random(Side::B, dims.d_b(), &mut rng);
        let psi = PureBipartiteState::product(&a, &b);
        parts.push((w, DensityOperator::from_pure(&psi)));
    }
    DensityOperator::mixture(&parts)
}

/// The 3 ⊗ 3 tiles state: the normalized projector onto the complement of
/// the five-member unextendible product basis. PPT but entangled; standard
/// fixture for the bound-entanglement pipeline.
pub fn tiles_upb() -> DensityOperator {
    let dims = Dims::new(3, 3).unwrap();
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let third = 1.0 / 3.0;

    let ket = |coeffs_a: [f64; 3], coeffs_b: [f64; 3]| -> DVector<Complex64> {
        let mut v = DVector::zeros(9);
        for (i, ca) in coeffs_a.iter().enumerate() {
            for (j, cb) in coeffs_b.iter().enumerate() {
                v[dims.composite(i, j)] = Complex64::new(ca * cb, 0.0);
            }
        }
        v
    };

    let members = [
        ket([1.0, 0.0, 0.0], [inv_sqrt2, -inv_sqrt2, 0.0]),
        ket([0.0, 0.0, 1.0], [0.0, inv_sqrt2, -inv_sqrt2]),
        ket([inv_sqrt2, -inv_sqrt2, 0.0], [0.0, 0.0, 1.0]),
        ket([0.0, inv_sqrt2, -inv_sqrt2], [1.0, 0.0, 0.0]),
        ket([third, third, third], [1.0, 1.0, 1.0]),
    ];

    let mut entries = DMatrix::identity(9, 9);
    for v in &members {
        for i in 0..9 {
            for j in 0..9 {
                entries[(i, j)] -= v[i] * v[j].conj();
            }
        }
    }
    let op = BipartiteOperator::new(dims, entries.scale(0.25)).unwrap();
    DensityOperator::new(op).unwrap()
}

/// Random positive operator f̂†f̂ with standard-normal f̂, deterministic per
/// seed. The bound-entanglement search draws its candidates from these.
pub fn random_positive(dims: Dims, seed: u64) -> BipartiteOperator {
    let mut rng = ChaCha12Rng::seed_from_u64(derive_seed(seed, 0x706f73));
    let n = dims.total();
    let f = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(
            rng.sample(rand_distr::StandardNormal),
            rng.sample(rand_distr::StandardNormal),
        )
    });
    let entries = f.adjoint() * &f;
    BipartiteOperator::new(dims, entries).expect("f†f is hermitian")
}
