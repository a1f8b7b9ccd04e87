//! Error types shared across the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input to an operation (bad permutation, basis mismatch, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    DomainError(String),

    /// Structural invariant of an input object fails; carries the witness.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A truncation window is too small to compute the requested blocks.
    /// `minimum` describes the smallest parameters that would work.
    #[error("window refused: {reason}; minimal valid window: {minimum}")]
    WindowRefused { reason: String, minimum: String },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
