//! Crate-wide error type.
//!
//! The three variants mirror the process exit codes of the CLI: domain
//! (precondition) failures, resource-budget failures, and cases the
//! implementation deliberately refuses to guess at.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// An argument violates a stated precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// The requested computation exceeds a configured resource ceiling.
    #[error("budget error: {0}")]
    Budget(String),
    /// A case the implementation knows about but does not support
    /// numerically; the message carries the symbolic form.
    #[error("unsupported case: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}
