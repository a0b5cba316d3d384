//! Separability eigenvalue solvers.
//!
//! A solution of
//!
//! Â_b|a⟩ = g|a⟩,   Â_a|b⟩ = g|b⟩,   ⟨a|a⟩ = ⟨b|b⟩ = 1,
//!
//! is a stationary value of ⟨a,b|Â|a,b⟩ over the product manifold; the
//! extremal solutions are f_AB(Â) = sup{g} and inf{g}. Solvers implement a
//! common [`SeparabilitySolver`] trait and are registered by name:
//!
//! - `alternating`: multistart alternating eigenvector iteration, works for
//!   every Hermitian operator;
//! - `rank-one`: exact Schmidt route for positively scaled rank-one
//!   projectors Â = λ|ψ⟩⟨ψ|;
//! - `auto`: dispatches to `rank-one` when the operator qualifies, otherwise
//!   to `alternating`.
//!
//! An independent grid-plus-refinement oracle for 2 ⊗ 2 operators lives in
//! [`brute_force_extrema`]; it deliberately shares no code with the solvers.

mod alternating;
mod oracle;
mod rank_one;

pub use alternating::AlternatingSolver;
pub use oracle::brute_force_extrema;
pub use rank_one::RankOneSolver;

use serde::Serialize;
use std::sync::OnceLock;

use crate::error::Error;
use crate::linalg::{kron_vec, BipartiteOperator, LocalVector};
use crate::{tol, Result};

/// Multistart iteration budget and tolerances.
#[derive(Debug, Clone, Copy, Serialize, serde::Deserialize)]
pub struct SolverConfig {
    /// Random product-state starts per branch (sup and inf run separately).
    pub starts: usize,
    /// Iteration cap per start.
    pub max_iter: usize,
    /// Convergence threshold on |g_{k+1} − g_k| and on both residuals.
    pub tol: f64,
    /// Seed for the counter-based start generator.
    pub seed: u64,
    /// Solutions with g closer than this and matching vectors are merged.
    pub dedup_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 64,
            max_iter: 500,
            tol: 1e-10,
            seed: 0,
            dedup_tol: 1e-7,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolverConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 {
            return Err(Error::InvalidParam("starts must be >= 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParam("tol must be > 0".into()));
        }
        if self.dedup_tol <= self.tol {
            return Err(Error::InvalidParam("dedup_tol must exceed tol".into()));
        }
        Ok(())
    }
}

/// One converged solution: the value g and its product vector.
#[derive(Debug, Clone, Serialize)]
pub struct SepEigenpair {
    pub g: f64,
    pub a: LocalVector,
    pub b: LocalVector,
    /// max(‖Â_b|a⟩ − g|a⟩‖, ‖Â_a|b⟩ − g|b⟩‖) at the reported solution.
    pub residual: f64,
}

/// Deduplicated solutions sorted by g descending.
///
/// Interior (saddle) values are enumerated best-effort; the extremes are the
/// quantities with a convergence guarantee and an independent oracle.
#[derive(Debug, Clone, Serialize)]
pub struct SepSpectrum {
    pub pairs: Vec<SepEigenpair>,
    pub sup_g: f64,
    pub inf_g: f64,
    pub starts_used: usize,
    pub converged_fraction: f64,
}

/// A strategy for solving the separability eigenvalue equations.
pub trait SeparabilitySolver: Send + Sync {
    /// Registry key.
    fn name(&self) -> &'static str;
    /// Whether this strategy applies to the operator.
    fn supports(&self, op: &BipartiteOperator) -> bool;
    fn solve(&self, op: &BipartiteOperator, cfg: &SolverConfig) -> Result<SepSpectrum>;
}

/// Dispatches to the exact rank-one route when the operator is a positively
/// scaled rank-one projector, otherwise to the alternating iteration.
pub struct AutoSolver;

impl SeparabilitySolver for AutoSolver {
    fn name(&self) -> &'static str {
        "auto"
    }

    fn supports(&self, _op: &BipartiteOperator) -> bool {
        true
    }

    fn solve(&self, op: &BipartiteOperator, cfg: &SolverConfig) -> Result<SepSpectrum> {
        if RankOneSolver.supports(op) {
            RankOneSolver.solve(op, cfg)
        } else {
            AlternatingSolver.solve(op, cfg)
        }
    }
}

/// Name-keyed collection of solver strategies.
pub struct SolverRegistry {
    solvers: Vec<Box<dyn SeparabilitySolver>>,
}

impl SolverRegistry {
    pub fn with_builtins() -> Self {
        let mut reg = SolverRegistry {
            solvers: Vec::new(),
        };
        reg.register(Box::new(AutoSolver));
        reg.register(Box::new(AlternatingSolver));
        reg.register(Box::new(RankOneSolver));
        reg
    }

    pub fn register(&mut self, solver: Box<dyn SeparabilitySolver>) {
        self.solvers.push(solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn SeparabilitySolver> {
        self.solvers
            .iter()
            .find(|s| s.name() == name)
            .map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solvers.iter().map(|s| s.name()).collect()
    }
}

/// Shared registry with the built-in strategies.
pub fn registry() -> &'static SolverRegistry {
    static REGISTRY: OnceLock<SolverRegistry> = OnceLock::new();
    REGISTRY.get_or_init(SolverRegistry::with_builtins)
}

/// Solve with the iterative multistart strategy.
pub fn solve_sepeig(op: &BipartiteOperator, cfg: &SolverConfig) -> Result<SepSpectrum> {
    AlternatingSolver.solve(op, cfg)
}

/// Exact spectrum of |ψ⟩⟨ψ| from the Schmidt decomposition: g = |m_q|² with
/// the Schmidt pair, plus the zero solutions |a_p', b_q⟩ (p ≠ q) once the
/// state is entangled.
pub fn solve_rank_one(psi: &crate::linalg::PureBipartiteState) -> Result<SepSpectrum> {
    rank_one::spectrum_of_state(psi, 1.0)
}

/// Maximal expectation value over separable states, f_AB(Â) = sup{g}.
pub fn f_ab(op: &BipartiteOperator, cfg: &SolverConfig) -> Result<f64> {
    Ok(AutoSolver.solve(op, cfg)?.sup_g)
}

/// Deterministic per-stream seed derivation (splitmix64 step), so multistart
/// runs are independent of thread scheduling.
pub(crate) fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sort descending by g, merge duplicates, derive sup/inf.
pub(crate) fn finalize_spectrum(
    mut pairs: Vec<SepEigenpair>,
    dedup_tol: f64,
    starts_used: usize,
    converged_fraction: f64,
) -> SepSpectrum {
    pairs.sort_by(|x, y| y.g.total_cmp(&x.g));
    let mut kept: Vec<SepEigenpair> = Vec::with_capacity(pairs.len());
    for cand in pairs {
        let dup = kept.iter().rev().take_while(|k| (k.g - cand.g).abs() < dedup_tol).any(|k| {
            k.a.matches_up_to_phase(&cand.a, tol::PHASE_MATCH)
                && k.b.matches_up_to_phase(&cand.b, tol::PHASE_MATCH)
        });
        if !dup {
            kept.push(cand);
        }
    }
    let sup_g = kept.first().map(|p| p.g).unwrap_or(f64::NAN);
    let inf_g = kept.last().map(|p| p.g).unwrap_or(f64::NAN);
    SepSpectrum {
        pairs: kept,
        sup_g,
        inf_g,
        starts_used,
        converged_fraction,
    }
}

/// Residual of a candidate solution against the operator itself.
pub(crate) fn pair_residual(
    op: &BipartiteOperator,
    g: f64,
    a: &LocalVector,
    b: &LocalVector,
) -> Result<f64> {
    let p_b = op.project_b(b)?;
    let p_a = op.project_a(a)?;
    let ra = (&p_b * a.coeffs() - a.coeffs() * num_complex::Complex64::new(g, 0.0)).norm();
    let rb = (&p_a * b.coeffs() - b.coeffs() * num_complex::Complex64::new(g, 0.0)).norm();
    Ok(ra.max(rb))
}

/// Structural checks on a converged solution.
#[derive(Debug, Clone, Serialize)]
pub struct Prop1Report {
    /// Largest cross coefficient |ψ_{k,0}| or |ψ_{0,l}| of Â|a₀,b₀⟩ in bases
    /// extending (a₀, b₀); vanishes for an exact solution.
    pub cross_coefficient_max: f64,
    /// Pairs in the spectrum sharing a factor with this one at different g.
    pub shared_factor_pairs: usize,
    /// Largest |⟨a₀|a₁⟩| (or ⟨b₀|b₁⟩) over the shared-factor pairs.
    pub orthogonality_max: f64,
    /// Pairs with distinct g compared for linear independence.
    pub distinct_pairs: usize,
    /// Smallest 2×2 Gram determinant 1 − |⟨a₀,b₀|a₁,b₁⟩|² over those pairs.
    pub min_gram_det: f64,
    pub violations: Vec<String>,
}

impl Prop1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

const CROSS_COEFF_TOL: f64 = 1e-8;
const ORTHOGONALITY_TOL: f64 = 1e-8;
const SHARED_FACTOR_DETECT: f64 = 1e-8;
const GRAM_DET_MIN: f64 = 1e-10;

/// Verify the solution properties of the separability eigenvalue problem for
/// one converged pair against the rest of the spectrum:
///
/// 1. Â|a₀,b₀⟩ expanded in orthonormal bases extending a₀ and b₀ has no
///    cross terms ψ_{k,0}, ψ_{0,l} (k, l ≠ 0);
/// 2. another solution at different g sharing one factor is orthogonal to
///    this one in the other factor;
/// 3. solutions at distinct g are linearly independent product vectors.
pub fn check_proposition1(
    op: &BipartiteOperator,
    pair: &SepEigenpair,
    spectrum: &SepSpectrum,
) -> Result<Prop1Report> {
    let mut violations = Vec::new();

    // 1: cross coefficients of Â|a₀,b₀⟩
    let v = op.entries() * kron_vec(pair.a.coeffs(), pair.b.coeffs());
    let basis_a = crate::linalg::orthonormal_extension(pair.a.coeffs());
    let basis_b = crate::linalg::orthonormal_extension(pair.b.coeffs());
    let (d_a, d_b) = (basis_a.ncols(), basis_b.ncols());
    let mut cross_max = 0.0f64;
    for k in 1..d_a {
        let ak = basis_a.column(k).clone_owned();
        let coeff = kron_vec(&ak, &basis_b.column(0).clone_owned()).dotc(&v);
        cross_max = cross_max.max(coeff.norm());
    }
    for l in 1..d_b {
        let bl = basis_b.column(l).clone_owned();
        let coeff = kron_vec(&basis_a.column(0).clone_owned(), &bl).dotc(&v);
        cross_max = cross_max.max(coeff.norm());
    }
    if cross_max > CROSS_COEFF_TOL {
        violations.push(format!(
            "cross coefficient {cross_max:.3e} exceeds {CROSS_COEFF_TOL:.0e}"
        ));
    }

    // 2 and 3 against the other solutions
    let dedup_tol = SolverConfig::default().dedup_tol;
    let mut shared_factor_pairs = 0usize;
    let mut orthogonality_max = 0.0f64;
    let mut distinct_pairs = 0usize;
    let mut min_gram_det = f64::INFINITY;
    let v0 = kron_vec(pair.a.coeffs(), pair.b.coeffs());

    for other in &spectrum.pairs {
        if (other.g - pair.g).abs() <= dedup_tol {
            continue;
        }
        distinct_pairs += 1;
        let v1 = kron_vec(other.a.coeffs(), other.b.coeffs());
        let det = 1.0 - v0.dotc(&v1).norm_sqr();
        min_gram_det = min_gram_det.min(det);
        if det <= GRAM_DET_MIN {
            violations.push(format!(
                "solutions at g={:.6} and g={:.6} nearly dependent (det {det:.3e})",
                pair.g, other.g
            ));
        }

        // shared B factor => orthogonal A factors, and vice versa
        if 1.0 - pair.b.overlap(&other.b).norm() < SHARED_FACTOR_DETECT {
            shared_factor_pairs += 1;
            let ov = pair.a.overlap(&other.a).norm();
            orthogonality_max = orthogonality_max.max(ov);
            if ov > ORTHOGONALITY_TOL {
                violations.push(format!(
                    "shared |b⟩ at g={:.6}/{:.6} but ⟨a₀|a₁⟩ = {ov:.3e}",
                    pair.g, other.g
                ));
            }
        }
        if 1.0 - pair.a.overlap(&other.a).norm() < SHARED_FACTOR_DETECT {
            shared_factor_pairs += 1;
            let ov = pair.b.overlap(&other.b).norm();
            orthogonality_max = orthogonality_max.max(ov);
            if ov > ORTHOGONALITY_TOL {
                violations.push(format!(
                    "shared |a⟩ at g={:.6}/{:.6} but ⟨b₀|b₁⟩ = {ov:.3e}",
                    pair.g, other.g
                ));
            }
        }
    }
    if distinct_pairs == 0 {
        min_gram_det = 1.0;
    }

    Ok(Prop1Report {
        cross_coefficient_max: cross_max,
        shared_factor_pairs,
        orthogonality_max,
        distinct_pairs,
        min_gram_det,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{DensityOperator, Dims, PureBipartiteState, Side};
    use crate::states::bell_phi;
    use approx::assert_abs_diff_eq;
    use nalgebra::{DMatrix, DVector};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn registry_lists_builtin_strategies() {
        let reg = registry();
        assert_eq!(reg.names(), vec!["auto", "alternating", "rank-one"]);
        assert!(reg.get("alternating").is_some());
        assert!(reg.get("nope").is_none());
    }

    #[test]
    fn identity_spectrum_is_flat() {
        let op = BipartiteOperator::identity(Dims::new(2, 2).unwrap());
        let spec = solve_sepeig(&op, &SolverConfig::with_seed(1)).unwrap();
        assert_abs_diff_eq!(spec.sup_g, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(spec.inf_g, 1.0, epsilon = 1e-10);
        assert!(spec.converged_fraction > 0.99);
    }

    #[test]
    fn bell_projector_sup_is_half() {
        let op = bell_phi().projector();
        let spec = solve_sepeig(&op, &SolverConfig::with_seed(2)).unwrap();
        assert_abs_diff_eq!(spec.sup_g, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(spec.inf_g, 0.0, epsilon = 1e-9);
        for p in &spec.pairs {
            assert!(p.residual < 1e-10);
            let direct = op.product_value(&p.a, &p.b).unwrap();
            assert_abs_diff_eq!(p.g, direct, epsilon = 1e-9);
        }
    }

    #[test]
    fn diagonal_operator_has_interior_eigenvalue() {
        // 2|00⟩⟨00| + |11⟩⟨11| has separability eigenvalues {2, 1, 0}
        let dims = Dims::new(2, 2).unwrap();
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = c(2.0, 0.0);
        m[(3, 3)] = c(1.0, 0.0);
        let op = BipartiteOperator::new(dims, m).unwrap();
        let spec = solve_sepeig(&op, &SolverConfig::with_seed(3)).unwrap();
        assert_abs_diff_eq!(spec.sup_g, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(spec.inf_g, 0.0, epsilon = 1e-9);
        let found_one = spec.pairs.iter().any(|p| (p.g - 1.0).abs() < 1e-8);
        assert!(found_one, "interior eigenvalue g=1 not found: {:?}",
            spec.pairs.iter().map(|p| p.g).collect::<Vec<_>>());

        // matches the independent oracle
        let (mx, mn) = brute_force_extrema(&op, 24).unwrap();
        assert_abs_diff_eq!(spec.sup_g, mx, epsilon = 1e-4);
        assert_abs_diff_eq!(spec.inf_g, mn, epsilon = 1e-4);
    }

    #[test]
    fn f_ab_examples() {
        let dims = Dims::new(2, 2).unwrap();
        let cfg = SolverConfig::with_seed(4);
        let id = BipartiteOperator::identity(dims);
        assert_abs_diff_eq!(f_ab(&id.scale(3.5), &cfg).unwrap(), 3.5, epsilon = 1e-9);
        assert_abs_diff_eq!(f_ab(&bell_phi().projector(), &cfg).unwrap(), 0.5, epsilon = 1e-9);
    }

    #[test]
    fn f_ab_is_pt_invariant() {
        let cfg = SolverConfig::with_seed(5);
        for seed in 0..6 {
            let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), seed);
            let f = f_ab(&op, &cfg).unwrap();
            let f_pt = f_ab(&op.partial_transpose(), &cfg).unwrap();
            assert_abs_diff_eq!(f, f_pt, epsilon = 1e-7);
        }
    }

    #[test]
    fn shift_and_scale_covariance() {
        let cfg = SolverConfig::with_seed(6);
        let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), 42);
        let f = f_ab(&op, &cfg).unwrap();
        assert_abs_diff_eq!(f_ab(&op.shift(1.25), &cfg).unwrap(), f + 1.25, epsilon = 1e-8);
        assert_abs_diff_eq!(f_ab(&op.scale(2.5), &cfg).unwrap(), 2.5 * f, epsilon = 1e-8);
    }

    #[test]
    fn shifted_spectrum_is_shifted_elementwise() {
        let cfg = SolverConfig::with_seed(7);
        let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), 9);
        let spec = solve_sepeig(&op, &cfg).unwrap();
        let spec_shift = solve_sepeig(&op.shift(0.5), &cfg).unwrap();
        assert_eq!(spec.pairs.len(), spec_shift.pairs.len());
        for (p, q) in spec.pairs.iter().zip(&spec_shift.pairs) {
            assert_abs_diff_eq!(p.g + 0.5, q.g, epsilon = 1e-8);
        }
    }

    #[test]
    fn pt_spectrum_matches_and_vectors_conjugate() {
        let cfg = SolverConfig::with_seed(8);
        for seed in [11u64, 12, 13] {
            let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), seed);
            let s1 = solve_sepeig(&op, &cfg).unwrap();
            let s2 = solve_sepeig(&op.partial_transpose(), &cfg).unwrap();
            // every g in one spectrum appears in the other
            for p in &s1.pairs {
                assert!(
                    s2.pairs.iter().any(|q| (p.g - q.g).abs() < cfg.dedup_tol),
                    "g={} of original missing under PT",
                    p.g
                );
            }
            for q in &s2.pairs {
                assert!(s1.pairs.iter().any(|p| (p.g - q.g).abs() < cfg.dedup_tol));
            }
            // solutions map as (a, b) -> (a, b*)
            for p in &s1.pairs {
                let found = s2.pairs.iter().any(|q| {
                    (p.g - q.g).abs() < cfg.dedup_tol
                        && q.a.matches_up_to_phase(&p.a, 1e-5)
                        && q.b.matches_up_to_phase(&p.b.conj(), 1e-5)
                });
                assert!(found, "conjugated partner of g={} not found", p.g);
            }
        }
    }

    #[test]
    fn sup_dominates_random_product_values() {
        use rand::SeedableRng;
        let cfg = SolverConfig::with_seed(9);
        let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), 21);
        let spec = solve_sepeig(&op, &cfg).unwrap();
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let a = LocalVector::random(Side::A, 2, &mut rng);
            let b = LocalVector::random(Side::B, 2, &mut rng);
            let v = op.product_value(&a, &b).unwrap();
            assert!(v <= spec.sup_g + 1e-8);
            assert!(v >= spec.inf_g - 1e-8);
        }
    }

    #[test]
    fn deterministic_across_runs_and_threads() {
        let cfg = SolverConfig::with_seed(10);
        let op = BipartiteOperator::random_hermitian(Dims::new(3, 3).unwrap(), 5);
        let s1 = solve_sepeig(&op, &cfg).unwrap();
        let s2 = solve_sepeig(&op, &cfg).unwrap();
        let j1 = serde_json::to_string(&s1).unwrap();
        let j2 = serde_json::to_string(&s2).unwrap();
        assert_eq!(j1, j2);

        // a differently sized thread pool must not change the result
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let s3 = pool.install(|| solve_sepeig(&op, &cfg).unwrap());
        assert_eq!(j1, serde_json::to_string(&s3).unwrap());
    }

    #[test]
    fn rank_one_route_examples() {
        // factorized state: single solution
        let dims = Dims::new(2, 2).unwrap();
        let mut amps = DVector::zeros(4);
        amps[0] = c(1.0, 0.0);
        let product = PureBipartiteState::new(dims, amps).unwrap();
        let spec = solve_rank_one(&product).unwrap();
        assert_eq!(spec.pairs.len(), 1);
        assert_abs_diff_eq!(spec.sup_g, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.inf_g, 1.0, epsilon = 1e-12);

        // Bell state: sup 1/2, zero solutions appear
        let spec = solve_rank_one(&bell_phi()).unwrap();
        assert_abs_diff_eq!(spec.sup_g, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.inf_g, 0.0, epsilon = 1e-12);

        // diagonal Schmidt state
        let mut amps = DVector::zeros(4);
        amps[0] = c(0.3f64.cos(), 0.0);
        amps[3] = c(0.3f64.sin(), 0.0);
        let psi = PureBipartiteState::new(dims, amps).unwrap();
        let spec = solve_rank_one(&psi).unwrap();
        assert_abs_diff_eq!(spec.sup_g, 0.3f64.cos().powi(2), epsilon = 1e-12);
    }

    #[test]
    fn auto_uses_exact_route_for_projectors() {
        let cfg = SolverConfig::with_seed(11);
        let op = bell_phi().projector();
        let spec = AutoSolver.solve(&op, &cfg).unwrap();
        // the exact route reports no iteration starts
        assert_eq!(spec.starts_used, 0);
        assert_abs_diff_eq!(spec.sup_g, 0.5, epsilon = 1e-12);

        // scaled projectors still qualify
        let spec = AutoSolver.solve(&op.scale(3.0), &cfg).unwrap();
        assert_eq!(spec.starts_used, 0);
        assert_abs_diff_eq!(spec.sup_g, 1.5, epsilon = 1e-12);

        // generic operators go through the iteration
        let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), 1);
        let spec = AutoSolver.solve(&op, &cfg).unwrap();
        assert!(spec.starts_used > 0);
    }

    #[test]
    fn proposition1_bell_pairs() {
        let op = bell_phi().projector();
        let spec = solve_rank_one(&bell_phi()).unwrap();
        for pair in &spec.pairs {
            let report = check_proposition1(&op, pair, &spec).unwrap();
            assert!(report.passed(), "violations: {:?}", report.violations);
        }
        // the half/zero pairs share a factor somewhere in the spectrum
        let top = &spec.pairs[0];
        let report = check_proposition1(&op, top, &spec).unwrap();
        assert!(report.shared_factor_pairs > 0);
        assert!(report.cross_coefficient_max < 1e-8);
    }

    #[test]
    fn proposition1_identity_is_vacuous() {
        let op = BipartiteOperator::identity(Dims::new(2, 2).unwrap());
        let spec = solve_sepeig(&op, &SolverConfig::with_seed(12)).unwrap();
        let report = check_proposition1(&op, &spec.pairs[0], &spec).unwrap();
        assert!(report.passed());
        assert_eq!(report.distinct_pairs, 0);
    }

    #[test]
    fn proposition1_random_operator() {
        let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), 42);
        let spec = solve_sepeig(&op, &SolverConfig::with_seed(13)).unwrap();
        for pair in &spec.pairs {
            let report = check_proposition1(&op, pair, &spec).unwrap();
            assert!(report.passed(), "violations: {:?}", report.violations);
        }
    }

    #[test]
    fn oracle_examples() {
        let id = BipartiteOperator::identity(Dims::new(2, 2).unwrap());
        let (mx, mn) = brute_force_extrema(&id, 12).unwrap();
        assert_abs_diff_eq!(mx, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(mn, 1.0, epsilon = 1e-9);

        let (mx, mn) = brute_force_extrema(&bell_phi().projector(), 16).unwrap();
        assert_abs_diff_eq!(mx, 0.5, epsilon = 1e-4);
        assert_abs_diff_eq!(mn, 0.0, epsilon = 1e-4);

        let op = BipartiteOperator::random_hermitian(Dims::new(2, 2).unwrap(), 42);
        let spec = solve_sepeig(&op, &SolverConfig::with_seed(14)).unwrap();
        let (mx, mn) = brute_force_extrema(&op, 20).unwrap();
        assert_abs_diff_eq!(spec.sup_g, mx, epsilon = 1e-4);
        assert_abs_diff_eq!(spec.inf_g, mn, epsilon = 1e-4);

        // restricted to 2x2 factors
        let op3 = BipartiteOperator::random_hermitian(Dims::new(3, 3).unwrap(), 1);
        assert!(brute_force_extrema(&op3, 12).is_err());
        assert!(brute_force_extrema(&id, 4).is_err());
    }

    #[test]
    fn rank_one_consistency_with_iteration() {
        use rand::Rng;
        use rand::SeedableRng;
        use rand_distr::StandardNormal;
        let cfg = SolverConfig {
            starts: 16,
            ..SolverConfig::with_seed(15)
        };
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(123);
        for &(da, db) in &[(2usize, 2usize), (3, 3)] {
            let dims = Dims::new(da, db).unwrap();
            for _ in 0..5 {
                let amps = DVector::from_fn(dims.total(), |_, _| {
                    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
                });
                let psi = PureBipartiteState::new(dims, amps).unwrap();
                let exact = solve_rank_one(&psi).unwrap().sup_g;
                let iter = solve_sepeig(&psi.projector(), &cfg).unwrap().sup_g;
                assert_abs_diff_eq!(exact, iter, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn expectation_equals_product_value_on_projectors() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(77);
        let op = BipartiteOperator::random_hermitian(Dims::new(2, 3).unwrap(), 2);
        for _ in 0..50 {
            let a = LocalVector::random(Side::A, 2, &mut rng);
            let b = LocalVector::random(Side::B, 3, &mut rng);
            let psi = PureBipartiteState::product(&a, &b);
            let rho = DensityOperator::from_pure(&psi);
            let lhs = op.product_value(&a, &b).unwrap();
            let rhs = op.expectation(&rho).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10);
        }
    }
}
