use alloc::boxed::Box;
use core::fmt;

use crate::support::SupportResult;

/// Errors shared by every module in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An operation that needs at least one coordinate got an empty vector.
    EmptyVector,
    /// Two vectors that must share a dimension do not.
    DimensionMismatch { expected: usize, got: usize },
    /// A scalar or vector entry is outside its documented domain.
    InvalidValue { what: &'static str, value: f64 },
    /// A grid oracle was asked for more points than it is willing to visit.
    GridTooLarge { dim: usize, max_dim: usize },
    /// A learner was fed a cost component outside `[-1, 1]`.
    CostOutOfRange { index: usize, value: f64 },
    /// The support solver exhausted its iteration budget; carries the best
    /// feasible point found so far.
    SupportNonConvergence(Box<SupportResult>),
    /// An oracle failed inside the game loop; carries the 1-based round.
    OracleFailure { round: usize, source: Box<Error> },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyVector => write!(f, "vector must have at least one entry"),
            Self::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Self::InvalidValue { what, value } => {
                write!(f, "invalid {what}: {value}")
            }
            Self::GridTooLarge { dim, max_dim } => {
                write!(f, "grid oracle refuses dimension {dim} (max {max_dim})")
            }
            Self::CostOutOfRange { index, value } => {
                write!(f, "cost entry {index} = {value} outside [-1, 1]")
            }
            Self::SupportNonConvergence(best) => {
                write!(
                    f,
                    "support solver did not converge; best objective {}",
                    best.h_value
                )
            }
            Self::OracleFailure { round, source } => {
                write!(f, "oracle failure at round {round}: {source}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
