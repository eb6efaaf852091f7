//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A distribution or test parameter is outside its domain.
    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    /// A probability argument fell outside (0, 1).
    #[error("probability out of range (0,1): {0}")]
    ProbabilityOutOfRange(f64),

    /// A requested parameter domain does not intersect the family's domain.
    #[error("empty parameter domain: {0}")]
    EmptyDomain(String),

    /// The data cannot be used for the requested procedure.
    #[error("data error: {0}")]
    Data(String),

    /// Sample size outside the supported range of a procedure.
    #[error("sample size {got} outside supported range [{min}, {max}]")]
    SampleSize { got: usize, min: usize, max: usize },

    /// An iterative solver failed to reach its tolerance.
    #[error("root solve failed: {context} (residual {residual:e})")]
    NoConvergence { context: &'static str, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
