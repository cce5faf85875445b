use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weight {index} is not a probability ({value})")]
    InvalidWeight { index: usize, value: f64 },

    #[error("weights sum to {sum:.17}, expected 1 within {tol:e}")]
    SumNotOne { sum: f64, tol: f64 },

    #[error("a distribution needs at least 2 outcomes, got {0}")]
    TooFewOutcomes(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {left} vs {right} outcomes")]
    DimensionMismatch { left: usize, right: usize },

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {estimate:e})")]
    ToleranceNotReached { tol: f64, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
