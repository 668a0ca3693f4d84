//! Error type shared by every module in the crate.

use thiserror::Error;

/// Crate-wide error enum.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violated a documented precondition (out-of-domain point,
    /// zero sample count, parameter outside its admissible range, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An autonomous-map operation was called on a measure-dependent
    /// system or vice versa.
    #[error("wrong evaluator: {0}")]
    WrongEvaluator(String),

    /// Two measures live on different phase spaces.
    #[error("phase mismatch: {0}")]
    PhaseMismatch(String),

    /// Two grids (or a grid and a matrix) have different resolutions.
    #[error("resolution mismatch: {0}")]
    ResolutionMismatch(String),

    /// Experiment configuration failed to parse or validate.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
