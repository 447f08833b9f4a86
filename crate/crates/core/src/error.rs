use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A point was given outside the region where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Input data failed a structural check (monotonicity, positivity, ...).
    #[error("validation failed: {0}")]
    Validation(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("truncation infeasible: degree {required} exceeds cap {cap}")]
    TruncationInfeasible { required: f64, cap: usize },
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn parameter<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

pub(crate) fn validation<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
