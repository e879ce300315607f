//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by parameter validation, builders and evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("dimension limit exceeded: {qubits} qubits > limit {limit}")]
    DimensionLimit { qubits: usize, limit: usize },
    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
    #[error("circuit is not a basis permutation: {0}")]
    NotPermutation(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
