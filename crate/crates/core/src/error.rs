//! Error type shared by every module.

use thiserror::Error;

/// Result alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed instance text or numbers.
    #[error("parse error: {0}")]
    Parse(String),
    /// An argument outside its documented range.
    #[error("{0} out of range")]
    OutOfRange(String),
    /// An enumeration or memory guard refused the input.
    #[error("guard: {0}")]
    Guard(String),
    /// Invalid generator or command parameters.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A structural invariant failed; this is a bug, not bad input.
    #[error("internal: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
