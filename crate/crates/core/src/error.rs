use thiserror::Error;

pub type Result<T, E = MixentError> = std::result::Result<T, E>;

/// Every failure mode of the library. Display strings lead with the
/// variant's name so command-line diagnostics can be grepped.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixentError {
    #[error("WeightError: {0}")]
    Weight(String),

    #[error("DimensionMismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("NotSymmetric: covariance asymmetry {asymmetry:e} exceeds 1e-12 of the largest entry")]
    NotSymmetric { asymmetry: f64 },

    #[error("NotPositiveDefinite: covariance has a non-positive pivot")]
    NotPositiveDefinite,

    #[error("NonPositiveScale: {0}")]
    NonPositiveScale(String),

    #[error("NonDiagonalCovariance: cross-family overlaps need a diagonal Gaussian covariance")]
    NonDiagonalCovariance,

    #[error("NonFiniteLogDensity: sample {index} has zero mixture density")]
    NonFiniteLogDensity { index: usize },

    #[error("ToleranceNotReached: error estimate {achieved:e} above target {requested:e} after {evaluations} evaluations")]
    ToleranceNotReached {
        achieved: f64,
        requested: f64,
        evaluations: usize,
    },

    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),

    #[error("InvalidSpec: {0}")]
    InvalidSpec(String),
}

impl MixentError {
    /// Failures raised by an overlap kernel's preconditions rather than by
    /// the model's own invariants.
    pub fn is_kernel_precondition(&self) -> bool {
        matches!(self, MixentError::NonDiagonalCovariance)
    }
}
