use thiserror::Error;

/// Errors raised by code construction, encoding and decoding.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("length mismatch for {what}: expected {expected}, got {actual}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{what}, line {line}: {reason}")]
    Parse {
        what: &'static str,
        line: usize,
        reason: String,
    },

    #[error("bound is not monotone: {0}")]
    NonMonotone(String),

    #[error("target BLER {target:e} not bracketed in [{lo} dB, {hi} dB]")]
    NotBracketed { target: f64, lo: f64, hi: f64 },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn check_len(what: &'static str, expected: usize, actual: usize) -> Result<()> {
        if expected == actual {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                what,
                expected,
                actual,
            })
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
