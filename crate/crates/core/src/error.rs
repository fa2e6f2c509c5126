use thiserror::Error;

/// Errors raised by path construction, propagation and fidelity evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("invalid noise configuration: {0}")]
    InvalidNoise(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("time {t} outside [0, {duration}]")]
    Domain { t: f64, duration: f64 },

    #[error("singular path: {0}")]
    SingularPath(String),

    #[error("envelope has zero area")]
    ZeroArea,

    #[error("degenerate request: {0}")]
    Degenerate(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("phase undefined: endpoint overlap {overlap:e} is too small")]
    UndefinedPhase { overlap: f64 },

    #[error("division by zero: {0}")]
    Division(String),
}

pub type Result<T> = std::result::Result<T, Error>;
