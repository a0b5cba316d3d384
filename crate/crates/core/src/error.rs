//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Operator/vector dimensions do not match, or a vector sits on the
    /// wrong tensor factor.
    #[error("dims: {0}")]
    Dims(String),

    /// Input matrix is too far from Hermitian to symmetrize away.
    #[error("non-hermitian input: asymmetry {asymmetry:.3e} exceeds {limit:.3e}")]
    NonHermitian { asymmetry: f64, limit: f64 },

    /// A state vector with (numerically) zero norm.
    #[error("null state")]
    NullState,

    /// Matrix fails the density-operator requirements.
    #[error("not a density operator: {0}")]
    InvalidDensity(String),

    /// No start of the multistart iteration converged.
    #[error("no convergence: best residual {best_residual:.3e} after {starts} starts")]
    NoConvergence { best_residual: f64, starts: usize },

    /// Truncated Fock expansion discards more probability mass than allowed.
    #[error("fock truncation too coarse: tail mass {mass:.3e} exceeds {limit:.3e}")]
    TailMass { mass: f64, limit: f64 },

    /// Operator grid would exceed the configured cap.
    #[error("grid cap exceeded: {count} operators > cap {cap}")]
    GridCapExceeded { count: u128, cap: u128 },

    /// The state is negative under partial transposition; the PPT-only
    /// bound-entanglement search does not apply. Use npt_check instead.
    #[error("use npt_check: state is NPT (min PT eigenvalue {min_eig:.3e})")]
    NotPpt { min_eig: f64 },

    /// A parameter outside its documented range.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::Dims(msg.into())
    }
}
