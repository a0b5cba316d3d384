//! Exact separability eigenvalues for rank-one projectors.
//!
//! For Â = λ|ψ⟩⟨ψ| (λ > 0) the separability eigenvalue equations reduce to
//! the eigenproblems of M̂M̂† and M̂†M̂, where M̂ is the coefficient matrix of
//! |ψ⟩. The nontrivial eigenvalues are λ|m_q|² at the Schmidt pairs, and the
//! mismatched pairings |a_p', b_q⟩ (p ≠ q) solve the equations with g = 0.

use crate::linalg::{BipartiteOperator, LocalVector, PureBipartiteState, Side};
use crate::schmidt::schmidt;
use crate::Result;

use super::{finalize_spectrum, pair_residual, SepEigenpair, SepSpectrum, SeparabilitySolver, SolverConfig};

/// Relative threshold below which trailing eigenvalues count as zero when
/// deciding whether an operator is a scaled rank-one projector.
const RANK_ONE_REL_TOL: f64 = 1e-12;

pub struct RankOneSolver;

impl RankOneSolver {
    /// Recognize Â = λ|ψ⟩⟨ψ| with λ > 0; returns (λ, |ψ⟩).
    pub fn detect(op: &BipartiteOperator) -> Option<(f64, PureBipartiteState)> {
        let (eigs, vecs) = crate::linalg::hermitian_eigen(op.entries());
        let n = eigs.len();
        let lambda = eigs[n - 1];
        if lambda <= 0.0 {
            return None;
        }
        let limit = RANK_ONE_REL_TOL * lambda.max(1.0);
        if eigs[..n - 1].iter().any(|e| e.abs() > limit) {
            return None;
        }
        let psi = PureBipartiteState::new(op.dims(), vecs.column(n - 1).clone_owned()).ok()?;
        Some((lambda, psi))
    }
}

impl SeparabilitySolver for RankOneSolver {
    fn name(&self) -> &'static str {
        "rank-one"
    }

    fn supports(&self, op: &BipartiteOperator) -> bool {
        Self::detect(op).is_some()
    }

    fn solve(&self, op: &BipartiteOperator, _cfg: &SolverConfig) -> Result<SepSpectrum> {
        let (lambda, psi) = Self::detect(op).ok_or_else(|| {
            crate::Error::InvalidParam(
                "rank-one solver needs a positively scaled rank-one projector".into(),
            )
        })?;
        spectrum_of_state(&psi, lambda)
    }
}

/// The analytic spectrum of λ|ψ⟩⟨ψ|, residuals evaluated against the actual
/// operator.
pub(super) fn spectrum_of_state(psi: &PureBipartiteState, lambda: f64) -> Result<SepSpectrum> {
    let sd = schmidt(psi);
    let rank = sd.rank();
    let op = psi.projector().scale(lambda);

    // canonical-phase copies; g is phase-invariant
    let canon = |v: &LocalVector, side: Side| LocalVector::new(side, v.coeffs().clone());

    let mut pairs = Vec::new();
    for q in 0..rank {
        let a = canon(&sd.left_vectors[q], Side::A)?;
        let b = canon(&sd.right_vectors[q], Side::B)?;
        let g = lambda * sd.coefficients[q] * sd.coefficients[q];
        let residual = pair_residual(&op, g, &a, &b)?;
        pairs.push(SepEigenpair { g, a, b, residual });
    }
    if rank >= 2 {
        let k = sd.coefficients.len();
        for p in 0..k {
            for q in 0..k {
                if p == q {
                    continue;
                }
                let a = canon(&sd.left_vectors[p], Side::A)?;
                let b = canon(&sd.right_vectors[q], Side::B)?;
                let residual = pair_residual(&op, 0.0, &a, &b)?;
                pairs.push(SepEigenpair {
                    g: 0.0,
                    a,
                    b,
                    residual,
                });
            }
        }
    }

    let dedup = SolverConfig::default().dedup_tol;
    Ok(finalize_spectrum(pairs, dedup, 0, 1.0))
}
