use thiserror::Error;

pub type Result<T, E = MeanError> = std::result::Result<T, E>;

/// Failure modes shared by the linear-algebra layer, the mean kernels and
/// the parameterized constructions.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum MeanError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not positive definite (smallest eigenvalue {min_eig:e}, floor {floor:e})")]
    NotPositiveDefinite { min_eig: f64, floor: f64 },

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("spectral function outside its domain: {0}")]
    DomainError(String),

    #[error("congruence transform is numerically singular (reciprocal condition {rcond:e})")]
    SingularTransform { rcond: f64 },

    #[error("shifted mean lost positivity (smallest eigenvalue {min_eig:e}); the parameter is too large for double precision")]
    NonPositiveResult { min_eig: f64 },

    #[error("parameters mix signs; all must be nonnegative or all negative")]
    MixedSignParameters,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty input tuple")]
    Empty,
}
