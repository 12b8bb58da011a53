use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value handed to the model violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} is outside the valid range {range}")]
    OutOfRange { what: &'static str, value: f64, range: &'static str },

    /// The model reached a state that has no physical meaning.
    #[error("unphysical configuration: {0}")]
    Unphysical(String),

    #[error("dataset integrity check failed: {0}")]
    Dataset(String),

    #[error("did not converge: {0}")]
    Convergence(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Configuration and input problems, as opposed to failures of the model itself.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Error::InvalidInput(_) | Error::Config(_) | Error::OutOfRange { .. })
    }
}
