//! Bipartite entanglement detection via the separability eigenvalue problem.
//!
//! A Hermitian test operator Â on H_A ⊗ H_B attains a maximal expectation
//! value over separable states,
//!
//! f_AB(Â) = sup{ ⟨a,b|Â|a,b⟩ : ⟨a|a⟩ = ⟨b|b⟩ = 1 },
//!
//! and a state ϱ is entangled if and only if tr(ϱÂ) > f_AB(Â) for some Â.
//! The supremum is a separability eigenvalue: a stationary value g of the
//! coupled equations
//!
//! Â_b|a⟩ = g|a⟩,   Â_a|b⟩ = g|b⟩,
//!
//! where Â_a = ⟨a|Â|a⟩ and Â_b = ⟨b|Â|b⟩ are the local projections of Â.
//! This crate solves those equations with interchangeable strategies (an
//! alternating eigenvector iteration and an exact Schmidt route for rank-one
//! projectors), builds optimal witnesses Ŵ = f_AB(Â)·1̂ − Â, and runs the
//! derived tests: upper/lower entanglement conditions, negativity under
//! partial transposition, and the two-condition check for PPT bound
//! entanglement.
//!
//! Operators are dense and intended for desk-scale dimensions (up to roughly
//! 16 ⊗ 16). All values are immutable after construction, so everything here
//! can be shared freely across threads.

pub mod error;
pub mod io;
pub mod linalg;
pub mod opgrid;
pub mod schmidt;
pub mod solver;
pub mod states;
pub mod witness;

pub use error::Error;
pub use linalg::{BipartiteOperator, DensityOperator, Dims, LocalVector, PureBipartiteState, Side};
pub use schmidt::{schmidt, schmidt_rank, SchmidtDecomposition};
pub use solver::{
    brute_force_extrema, f_ab, registry, solve_sepeig, solve_rank_one, SepEigenpair, SepSpectrum,
    SeparabilitySolver, SolverConfig,
};
pub use witness::{Verdict, VerdictKind, Witness};

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Numerical thresholds shared by the whole crate.
///
/// Constructor tolerances sit at accumulated f64 rounding for dense algebra
/// at desk-scale dimensions; decision thresholds sit well above solver error
/// but far below any physical margin in the worked examples.
pub mod tol {
    /// Maximum Hermitian asymmetry max|M − M†| accepted at construction.
    pub const HERMITICITY_REJECT: f64 = 1e-10;
    /// Stored operators are symmetrized, so they satisfy this bound exactly.
    pub const HERMITICITY: f64 = 1e-12;
    /// Unit-norm tolerance for state vectors.
    pub const UNIT_NORM: f64 = 1e-12;
    /// Density operators: |tr ϱ − 1| bound.
    pub const TRACE_ONE: f64 = 1e-10;
    /// Density operators: smallest admissible eigenvalue.
    pub const PSD_FLOOR: f64 = -1e-10;
    /// Expectation values: imaginary residue above this is an input error.
    pub const IMAG_RESIDUE: f64 = 1e-8;
    /// Singular values below this do not count towards the Schmidt rank.
    pub const SCHMIDT_RANK: f64 = 1e-9;
    /// Margin a verdict must exceed before a state is called entangled.
    pub const DECISION_MARGIN: f64 = 1e-9;
    /// Vectors agreeing up to phase within this are the same solution.
    pub const PHASE_MATCH: f64 = 1e-6;
}
