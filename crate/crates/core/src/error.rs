use thiserror::Error;

/// Errors raised by the library layer (policies, estimators, environments, oracles).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid problem dimensions: {0}")]
    InvalidDims(String),

    #[error("policy contract violation: {0}")]
    Contract(String),

    #[error("reward {0} is outside [0, 1]")]
    RewardRange(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid interval [{start}, {end}]")]
    Interval { start: usize, end: usize },

    #[error("out of range: {0}")]
    Range(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
