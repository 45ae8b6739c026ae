use thiserror::Error;

use crate::decompose::SymmetryReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("point count mismatch: expected {expected}, got {actual}")]
    CountMismatch { expected: usize, actual: usize },

    #[error("non-finite coordinate at point {point}, axis {axis}")]
    NonFinite { point: usize, axis: usize },

    #[error("generator count C({0}+{1}, {1}) overflows u64")]
    Overflow(usize, usize),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("power sums are not in the image of the embedding: {0}")]
    NotInImage(String),

    #[error("ill-conditioned root recovery: {0}")]
    IllConditioned(String),

    #[error("dataset violates permutation symmetry on {} orbit(s)", .0.violations.len())]
    SymmetryViolation(Box<SymmetryReport>),

    #[error("decomposition table is empty")]
    EmptyTable,

    #[error("interpolation failed: {0}")]
    Interpolation(String),

    #[error("not enough usable samples: need {needed}, have {have}")]
    InsufficientSamples { needed: usize, have: usize },

    #[error("unknown example {id:?}; valid ids: {}", .valid.join(", "))]
    UnknownExample { id: String, valid: Vec<&'static str> },
}
