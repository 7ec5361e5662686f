use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("{what} requires n >= {min}, got n = {n}")]
    IndexOutOfRange { what: &'static str, n: usize, min: usize },

    #[error("block ({row}, {col}) is not circulant")]
    NotCirculant { row: usize, col: usize },

    #[error("entry ({row}, {col}) has coefficient {value} at x^{exponent}; expected 0 or 1")]
    NonBinary {
        row: usize,
        col: usize,
        exponent: usize,
        value: String,
    },

    #[error("{0}")]
    Domain(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("node budget of {0} exhausted")]
    Budget(u64),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
