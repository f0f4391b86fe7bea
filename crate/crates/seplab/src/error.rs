use crate::numtheory::Congruence;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The target is not a power of the base in the given modulus.
    #[error("target is not in the subgroup generated by the base")]
    NotInSubgroup,

    /// Two congruences admit no common solution.
    #[error("inconsistent congruences: x = {a} and x = {b}")]
    Inconsistent { a: Congruence, b: Congruence },

    /// Internally computed values contradict each other.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// A search or retry budget ran out before completion.
    #[error("resource budget exhausted: {0}")]
    ResourceExhausted(String),

    /// The input admits no unique solution (singular or ill-conditioned).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A callee returned data that violates its contract.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub fn exhausted(msg: impl Into<String>) -> Self {
        Error::ResourceExhausted(msg.into())
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
