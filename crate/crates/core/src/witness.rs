//! Witness construction and the entanglement verdicts.
//!
//! Ŵ_opt = f_AB(Â)·1̂ − Â is an optimal witness for any Hermitian Â. The
//! upper test flags ϱ entangled when tr(ϱÂ) > f_AB(Â); the lower test uses
//! the infimum and is algebraically the upper test applied to −Â. The NPT
//! check looks for negativity of ϱ^PT directly, and the bound-entanglement
//! check combines PPT with a budgeted search for a positive Ĉ violating
//! inf{⟨a,b|Ĉ|a,b⟩} ≤ tr(ϱ Ĉ^PT).

use serde::Serialize;

use crate::error::Error;
use crate::linalg::{BipartiteOperator, DensityOperator, Dims};
use crate::solver::{f_ab, solve_sepeig, SolverConfig};
use crate::states::{random_positive, random_separable};
use crate::{tol, Result};

/// Optimal entanglement witness built from a test operator.
#[derive(Debug, Clone)]
pub struct Witness {
    /// f_AB(Â)·1̂ − Â.
    pub op: BipartiteOperator,
    pub f_value: f64,
    /// The test operator Â the witness was built from.
    pub source: BipartiteOperator,
    /// Offset equals f_AB exactly (not merely an upper bound).
    pub optimal: bool,
}

/// Outcome classes of the entanglement tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Entangled,
    NotDetected,
    #[serde(rename = "NPT")]
    Npt,
    #[serde(rename = "PPT")]
    Ppt,
    BoundEntangled,
    Inconclusive,
}

/// Result record of one test. `NotDetected` and `Inconclusive` never certify
/// separability; only positive detections carry meaning.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Violation amount; detections require margin > 1e−9.
    pub margin: f64,
    pub witness_used: Option<Witness>,
    pub detail: String,
}

impl Verdict {
    fn new(kind: VerdictKind, margin: f64, detail: String) -> Self {
        Verdict {
            kind,
            margin,
            witness_used: None,
            detail,
        }
    }

    /// Detections flip the process exit code for scripting.
    pub fn detected(&self) -> bool {
        matches!(
            self.kind,
            VerdictKind::Entangled | VerdictKind::Npt | VerdictKind::BoundEntangled
        )
    }
}

impl Serialize for Verdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Verdict", 3)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("margin", &self.margin)?;
        st.serialize_field("detail", &self.detail)?;
        st.end()
    }
}

/// Ŵ_opt = f_AB(Â)·1̂ − Â. Shifting Â by κ·1̂ leaves the witness unchanged.
pub fn build_witness(a: &BipartiteOperator, cfg: &SolverConfig) -> Result<Witness> {
    let f = f_ab(a, cfg)?;
    let op = &BipartiteOperator::identity(a.dims()).scale(f) - a;
    Ok(Witness {
        op,
        f_value: f,
        source: a.clone(),
        optimal: true,
    })
}

/// Upper entanglement condition: ϱ is entangled when tr(ϱÂ) > f_AB(Â).
pub fn test_upper(
    rho: &DensityOperator,
    a: &BipartiteOperator,
    cfg: &SolverConfig,
) -> Result<Verdict> {
    check_dims(rho.dims(), a.dims())?;
    let trace = a.expectation(rho)?;
    let f = match f_ab(a, cfg) {
        Ok(f) => f,
        Err(Error::NoConvergence { best_residual, .. }) => {
            return Ok(Verdict::new(
                VerdictKind::Inconclusive,
                0.0,
                format!("solver failed to converge (best residual {best_residual:.3e})"),
            ))
        }
        Err(e) => return Err(e),
    };
    let margin = trace - f;
    if margin > tol::DECISION_MARGIN {
        Ok(Verdict::new(
            VerdictKind::Entangled,
            margin,
            format!("tr(rho A) = {trace:.9} exceeds f_AB = {f:.9}"),
        ))
    } else {
        Ok(Verdict::new(
            VerdictKind::NotDetected,
            margin,
            format!("tr(rho A) = {trace:.9} within f_AB = {f:.9}; no certificate"),
        ))
    }
}

/// Lower entanglement condition: ϱ is entangled when inf{g} > tr(ϱÂ).
/// Evaluated as the upper test on −Â, to which it is equivalent.
pub fn test_lower(
    rho: &DensityOperator,
    a: &BipartiteOperator,
    cfg: &SolverConfig,
) -> Result<Verdict> {
    let mut v = test_upper(rho, &-a, cfg)?;
    if v.kind == VerdictKind::Entangled || v.kind == VerdictKind::NotDetected {
        v.detail = format!("lower condition via -A: {}", v.detail);
    }
    Ok(v)
}

/// Negativity under partial transposition: NPT when λ_min(ϱ^PT) < −1e−10.
pub fn npt_check(rho: &DensityOperator) -> Verdict {
    let min_eig = rho.partial_transpose().min_eigenvalue();
    if min_eig < tol::PSD_FLOOR {
        Verdict::new(
            VerdictKind::Npt,
            min_eig.abs(),
            format!("PT has negative eigenvalue {min_eig:.9}"),
        )
    } else {
        Verdict::new(
            VerdictKind::Ppt,
            0.0,
            format!("PT minimum eigenvalue {min_eig:.3e} is non-negative"),
        )
    }
}

/// PPT bound-entanglement search. For a PPT state, a positive Ĉ with
/// inf{⟨a,b|Ĉ|a,b⟩} > tr(ϱ Ĉ^PT) certifies entanglement. User candidates are
/// tried first, then `budget` random f̂†f̂ draws seeded from the config.
/// Exhausting the budget is `Inconclusive`, never a separability claim.
pub fn bound_check(
    rho: &DensityOperator,
    candidates: &[BipartiteOperator],
    budget: usize,
    cfg: &SolverConfig,
) -> Result<Verdict> {
    let pt_min = rho.partial_transpose().min_eigenvalue();
    if pt_min < tol::PSD_FLOOR {
        return Err(Error::NotPpt { min_eig: pt_min });
    }
    for (i, c) in candidates.iter().enumerate() {
        check_dims(rho.dims(), c.dims())?;
        let min_eig = c.min_eigenvalue();
        if min_eig < tol::PSD_FLOOR {
            return Err(Error::InvalidParam(format!(
                "candidate {i} is not positive (min eigenvalue {min_eig:.3e})"
            )));
        }
    }

    let mut best_margin = f64::NEG_INFINITY;
    let mut tried = 0usize;
    let mut screen = |c: &BipartiteOperator, label: String| -> Result<Option<Verdict>> {
        tried += 1;
        let inf_g = solve_sepeig(c, cfg)?.inf_g;
        let trace_pt = c.partial_transpose().expectation(rho)?;
        let margin = inf_g - trace_pt;
        best_margin = best_margin.max(margin);
        if margin > tol::DECISION_MARGIN {
            return Ok(Some(Verdict::new(
                VerdictKind::BoundEntangled,
                margin,
                format!("{label}: inf g = {inf_g:.9} > tr(rho C^PT) = {trace_pt:.9}"),
            )));
        }
        Ok(None)
    };

    for (i, c) in candidates.iter().enumerate() {
        if let Some(v) = screen(c, format!("candidate {i}"))? {
            return Ok(v);
        }
    }
    for k in 0..budget {
        let c = random_positive(rho.dims(), crate::solver::derive_seed(cfg.seed, k as u64));
        if let Some(v) = screen(&c, format!("random candidate {k}"))? {
            return Ok(v);
        }
    }

    Ok(Verdict::new(
        VerdictKind::Inconclusive,
        best_margin,
        format!("no violation among {tried} candidates (best margin {best_margin:.3e})"),
    ))
}

/// Report of the partial-positivity checks on a candidate witness.
#[derive(Debug, Clone, Serialize)]
pub struct PartialPositiveReport {
    /// Smallest tr(σŴ) over the sampled separable mixtures.
    pub min_sampled: f64,
    pub samples: usize,
    /// f_AB(−Ŵ) = −inf{⟨a,b|Ŵ|a,b⟩}; at most ~0 for a partial positive Ŵ.
    pub f_of_negated: f64,
    pub spectral_norm: f64,
    pub monte_carlo_pass: bool,
    pub exact_pass: bool,
}

impl PartialPositiveReport {
    pub fn passed(&self) -> bool {
        self.monte_carlo_pass && self.exact_pass
    }
}

const PARTIAL_POSITIVE_SLACK: f64 = 1e-8;

/// Monte-Carlo plus exact check that Ŵ has non-negative expectation on
/// separable states.
pub fn validate_partial_positive(
    w: &BipartiteOperator,
    samples: usize,
    cfg: &SolverConfig,
) -> Result<PartialPositiveReport> {
    let dims = w.dims();
    let max_terms = dims.total().max(2);
    let mut min_sampled = f64::INFINITY;
    for k in 0..samples {
        let seed = crate::solver::derive_seed(cfg.seed, 0x7661_0000_0000_0000 ^ k as u64);
        let terms = 1 + (seed as usize) % max_terms;
        let sigma = random_separable(dims, terms, seed)?;
        min_sampled = min_sampled.min(w.expectation(&sigma)?);
    }
    let f_of_negated = f_ab(&-w, cfg)?;
    Ok(PartialPositiveReport {
        min_sampled,
        samples,
        f_of_negated,
        spectral_norm: w.spectral_norm(),
        monte_carlo_pass: samples == 0 || min_sampled >= -PARTIAL_POSITIVE_SLACK,
        exact_pass: f_of_negated <= PARTIAL_POSITIVE_SLACK,
    })
}

fn check_dims(lhs: Dims, rhs: Dims) -> Result<()> {
    if lhs != rhs {
        return Err(Error::dims(format!("state dims {lhs} vs operator dims {rhs}")));
    }
    Ok(())
}
