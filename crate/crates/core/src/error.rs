use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::minnorm::MinNormResult;

/// Errors raised by the problem model and the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("point is infeasible (constraint violation {violation:e})")]
    Infeasible { violation: f64 },

    #[error("degenerate constraint: {0}")]
    DegenerateConstraint(String),

    /// The min-norm solver hit its iteration limit. `best` is the last iterate.
    #[error("min-norm solver did not converge within {iterations} iterations (gap {gap:e})")]
    NoConvergence {
        iterations: usize,
        gap: f64,
        best: Box<MinNormResult>,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The reference point is dominated by `witness`.
    #[error("reference point is not Pareto efficient on the sample set")]
    ParetoViolation { witness: Vec<f64> },

    #[error("no start reached the sublevel set inside the search box")]
    EmptySublevel,

    #[error("every start diverged")]
    SearchFailure,

    #[error("grid has {points} points, limit is {limit}")]
    GridTooLarge { points: u128, limit: u128 },
}

impl Error {
    /// True for failures of the numerical machinery rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::EmptySublevel | Error::SearchFailure
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
