use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised anywhere in the library.
///
/// Parser errors carry byte offsets into the offending word.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A prime index or prime value fell outside what the backend may sieve.
    #[error("index overflow: {what} exceeds the prime backend ceiling {ceiling}")]
    IndexOverflow { what: String, ceiling: u64 },

    #[error("{value} is not prime")]
    NotPrime { value: BigUint },

    #[error("factorization failed: could not split cofactor {cofactor}")]
    FactorizationFailure { cofactor: BigUint },

    #[error("unbalanced word at byte offset {offset}: {reason}")]
    Unbalanced { offset: usize, reason: &'static str },

    #[error(
        "non-canonical word: block {block} at byte offset {offset} sorts before its left sibling"
    )]
    NonCanonical { offset: usize, block: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid integer {input:?} at byte offset {offset}: {reason}")]
    ParseInt {
        input: String,
        offset: usize,
        reason: &'static str,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
