#![allow(clippy::needless_range_loop)] // index loops mirror the math throughout
#![allow(clippy::field_reassign_with_default)]
#![allow(clippy::neg_cmp_op_on_partial_ord)] // !(a >= b) distinguishes NaN deliberately

//! avekit: a toolkit for absolute value equations.
//!
//! The library covers the square system `Ax - |x| = b` (AVE) and its
//! generalization `Ax - B|x| = b` (GAVE):
//!
//! * [`core`] — problem types, dense linear algebra, and a vertex-reporting
//!   simplex solver;
//! * [`analysis`] — executable certificates for solvability, unique
//!   solvability, nonexistence, solution bounds, solution-set structure,
//!   condition numbers and error bounds;
//! * [`solvers`] — generalized Newton variants, Picard and splitting
//!   iterations, SOR-like and Gauss-Seidel schemes, concave-minimization
//!   methods, the sign accord algorithm, signed Gaussian elimination, a
//!   closed-form special case, and an exhaustive orthant enumerator that
//!   doubles as the test oracle;
//! * [`transforms`] — exact reductions between AVE, LCP, GAVE, Sylvester-type
//!   matrix equations, mixed 0-1 programs (with MPS export) and interval
//!   linear systems;
//! * [`correction`] — minimum-norm and sparsest solution selection, plus
//!   optimal correction of infeasible systems.
//!
//! Everything is dense and deterministic; the intended scale is n up to a
//! few thousand for direct solvers and n <= 22 for orthant enumeration.

pub mod analysis;
pub mod core;
pub mod correction;
pub mod solvers;
pub mod transforms;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum AveError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("enumeration cap exceeded: n = {n} > cap = {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("iteration did not converge; last estimate {estimate}")]
    NonConvergence { estimate: f64 },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("instance is unsolvable: {0}")]
    Unsolvable(String),
    #[error("linear program failed: {0}")]
    Lp(String),
}

pub use crate::core::{
    gray_signs, sgn, sign_diag, AveProblem, GaveProblem, SignVector, SolveOutcome, SolverConfig,
    Status, ENUM_HARD_CAP,
};
pub use crate::core::mat::Mat;
