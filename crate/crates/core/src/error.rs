use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} is outside the supported range 1..={max}")]
    InvalidDimension { n: usize, max: usize },

    #[error("n = {n} exceeds the brute-force cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid bit string {0:?}")]
    InvalidBitString(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid ordered partition: {0}")]
    InvalidOrderedPartition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A construction finished but its guaranteed postcondition does not hold.
    #[error("postcondition violated in {construction}: {detail}")]
    Postcondition {
        construction: &'static str,
        detail: String,
    },
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
