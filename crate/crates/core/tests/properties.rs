//! Property-based invariants over randomized operators and states.

use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use sepeig::{
    schmidt, solve_sepeig, BipartiteOperator, DensityOperator, Dims, LocalVector,
    PureBipartiteState, Side, SolverConfig,
};

fn random_state(dims: Dims, seed: u64) -> PureBipartiteState {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let amps = DVector::from_fn(dims.total(), |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    PureBipartiteState::new(dims, amps).unwrap()
}

fn random_locals(dims: Dims, seed: u64) -> (LocalVector, LocalVector) {
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0xabcd);
    (
        LocalVector::random(Side::A, dims.d_a(), &mut rng),
        LocalVector::random(Side::B, dims.d_b(), &mut rng),
    )
}

fn max_asymmetry(m: &nalgebra::DMatrix<Complex64>) -> f64 {
    (m - m.adjoint()).iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn dims_strategy() -> impl Strategy<Value = (usize, usize)> {
    (2usize..=4, 2usize..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projections_and_pt_stay_hermitian(((da, db), seed) in (dims_strategy(), any::<u64>())) {
        let dims = Dims::new(da, db).unwrap();
        let op = BipartiteOperator::random_hermitian(dims, seed);
        let (a, b) = random_locals(dims, seed);
        prop_assert!(max_asymmetry(&op.project_a(&a).unwrap()) < 1e-12);
        prop_assert!(max_asymmetry(&op.project_b(&b).unwrap()) < 1e-12);
        prop_assert!(max_asymmetry(op.partial_transpose().entries()) < 1e-12);
    }

    #[test]
    fn product_value_matches_expectation(((da, db), seed) in (dims_strategy(), any::<u64>())) {
        let dims = Dims::new(da, db).unwrap();
        let op = BipartiteOperator::random_hermitian(dims, seed);
        let (a, b) = random_locals(dims, seed);
        let rho = DensityOperator::from_pure(&PureBipartiteState::product(&a, &b));
        let lhs = op.product_value(&a, &b).unwrap();
        let rhs = op.expectation(&rho).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);

        // bounded by the operator spectrum
        let eigs = op.eigenvalues();
        prop_assert!(lhs >= eigs[0] - 1e-10 && lhs <= eigs[eigs.len() - 1] + 1e-10);
    }

    #[test]
    fn partial_transpose_is_trace_preserving_linear_involution(
        ((da, db), s1, s2) in (dims_strategy(), any::<u64>(), any::<u64>())
    ) {
        let dims = Dims::new(da, db).unwrap();
        let x = BipartiteOperator::random_hermitian(dims, s1);
        let y = BipartiteOperator::random_hermitian(dims, s2);
        prop_assert!((x.partial_transpose().trace() - x.trace()).abs() < 1e-12);
        let twice = x.partial_transpose().partial_transpose();
        prop_assert_eq!(twice.entries(), x.entries());
        // linearity
        let sum_pt = (&x + &y).partial_transpose();
        let pt_sum = &x.partial_transpose() + &y.partial_transpose();
        prop_assert_eq!(sum_pt.entries(), pt_sum.entries());
    }

    #[test]
    fn pt_product_identity(((da, db), seed) in (dims_strategy(), any::<u64>())) {
        // g_PT(a, b*) = g(a, b)
        let dims = Dims::new(da, db).unwrap();
        let op = BipartiteOperator::random_hermitian(dims, seed);
        let (a, b) = random_locals(dims, seed);
        let lhs = op.partial_transpose().product_value(&a, &b.conj()).unwrap();
        let rhs = op.product_value(&a, &b).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn schmidt_weights_and_reconstruction(((da, db), seed) in (dims_strategy(), any::<u64>())) {
        let dims = Dims::new(da, db).unwrap();
        let psi = random_state(dims, seed);
        let sd = schmidt(&psi);
        let total: f64 = sd.coefficients.iter().map(|m| m * m).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let overlap = sd.reconstruct().dotc(psi.amplitudes()).norm();
        prop_assert!(overlap > 1.0 - 1e-9);
    }

    #[test]
    fn schmidt_top_weight_matches_solver(seed in any::<u64>()) {
        // cross-module oracle: max |m_q|² equals f_AB of the projector
        let dims = Dims::new(2, 2).unwrap();
        let psi = random_state(dims, seed);
        let top = schmidt(&psi).coefficients[0];
        let cfg = SolverConfig { starts: 12, ..SolverConfig::with_seed(seed) };
        let sup = solve_sepeig(&psi.projector(), &cfg).unwrap().sup_g;
        prop_assert!((top * top - sup).abs() < 1e-9);
    }
}

proptest! {
    // heavier solver cases, fewer repetitions
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn converged_pairs_satisfy_their_equations(seed in any::<u64>()) {
        let dims = Dims::new(2, 2).unwrap();
        let op = BipartiteOperator::random_hermitian(dims, seed);
        let cfg = SolverConfig { starts: 12, ..SolverConfig::with_seed(seed) };
        let spec = solve_sepeig(&op, &cfg).unwrap();
        prop_assert!(spec.converged_fraction > 0.0);
        for p in &spec.pairs {
            prop_assert!(p.residual < cfg.tol);
            let g = op.product_value(&p.a, &p.b).unwrap();
            prop_assert!((g - p.g).abs() < 1e-9);
            prop_assert!(p.g <= spec.sup_g + 1e-12 && p.g >= spec.inf_g - 1e-12);
        }
    }

    #[test]
    fn spectrum_shift_covariance(seed in any::<u64>(), kappa in -2.0f64..2.0) {
        let dims = Dims::new(2, 2).unwrap();
        let op = BipartiteOperator::random_hermitian(dims, seed);
        let cfg = SolverConfig { starts: 12, ..SolverConfig::with_seed(seed) };
        let base = solve_sepeig(&op, &cfg).unwrap();
        let shifted = solve_sepeig(&op.shift(kappa), &cfg).unwrap();
        prop_assert_eq!(base.pairs.len(), shifted.pairs.len());
        for (p, q) in base.pairs.iter().zip(&shifted.pairs) {
            prop_assert!((p.g + kappa - q.g).abs() < 1e-8);
        }
    }
}
