//! Error type shared across the crate.

use std::fmt;

use crate::rat::Rat;

/// Errors produced by exact-arithmetic operations.
///
/// `InvariantViolation` is reserved for conditions that are mathematically
/// impossible when the code is correct; callers surface it loudly instead of
/// recovering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A square matrix was required.
    NonSquare { rows: usize, cols: usize },
    /// A matrix inverse was requested for a singular matrix.
    Singular,
    /// Two objects had incompatible dimensions.
    DimensionMismatch { expected: usize, found: usize },
    /// A Gram matrix was not symmetric (first offending entry pair).
    NotSymmetric { row: usize, col: usize },
    /// A Gram matrix was not positive definite; carries the 1-based order of
    /// the first non-positive leading principal minor and its exact value.
    NotPositiveDefinite { minor_order: usize, minor: Rat },
    /// A map that had to be injective was not.
    NotInjective,
    /// A map that had to be surjective was not.
    NotSurjective,
    /// Generators spanned the zero submodule where a nonzero one was needed.
    ZeroSubmodule,
    /// A rank argument was outside the valid range for the ambient lattice.
    RankOutOfRange { rank: usize, ambient: usize },
    /// Vectors required to be linearly independent were dependent.
    DependentVectors,
    /// The branch-and-bound search exceeded its node budget.
    SearchCapExceeded { nodes: u64 },
    /// A brute-force box scan would have visited too many points.
    BoxTooLarge { points: u128, limit: u128 },
    /// A brute-force routine refused an input above its supported rank.
    RankRefused { rank: usize, max: usize },
    /// A precondition documented on the operation did not hold.
    Precondition(String),
    /// Input could not be parsed.
    Parse(String),
    /// A condition that is mathematically guaranteed failed; this indicates
    /// a bug and is never recoverable.
    InvariantViolation(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonSquare { rows, cols } => {
                write!(f, "square matrix required, got {rows}x{cols}")
            }
            Error::Singular => write!(f, "matrix is singular"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotSymmetric { row, col } => {
                write!(f, "matrix not symmetric at ({row},{col})/({col},{row})")
            }
            Error::NotPositiveDefinite { minor_order, minor } => write!(
                f,
                "matrix not positive definite: leading principal minor of order {minor_order} is {minor}"
            ),
            Error::NotInjective => write!(f, "linear map is not injective"),
            Error::NotSurjective => write!(f, "linear map is not surjective"),
            Error::ZeroSubmodule => write!(f, "generators span the zero submodule"),
            Error::RankOutOfRange { rank, ambient } => {
                write!(f, "rank {rank} out of range for ambient rank {ambient}")
            }
            Error::DependentVectors => write!(f, "vectors are linearly dependent"),
            Error::SearchCapExceeded { nodes } => {
                write!(f, "search node budget exceeded ({nodes} nodes)")
            }
            Error::BoxTooLarge { points, limit } => {
                write!(f, "box scan of {points} points exceeds limit {limit}")
            }
            Error::RankRefused { rank, max } => {
                write!(f, "brute-force path refuses rank {rank} (max {max})")
            }
            Error::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::InvariantViolation(msg) => write!(f, "invariant violation (bug): {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
