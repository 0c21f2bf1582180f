use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum PacError {
    #[error("{what}: expected length {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{what}: length {len} is not a power of two")]
    NotPowerOfTwo { what: &'static str, len: usize },

    #[error("generator polynomial is not invertible: {0}")]
    NotInvertible(String),

    #[error("invalid code spec: {0}")]
    InvalidSpec(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("decoder state: {0}")]
    DecoderState(&'static str),

    #[error("{what} = {value} exceeds the limit of {limit}")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },
}

pub type Result<T> = std::result::Result<T, PacError>;
