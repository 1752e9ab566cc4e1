use thiserror::Error;

/// Errors raised by constructors, the experiment harness and the oracles.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bitstring length must be at least 1")]
    EmptyBitstring,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown {kind} `{value}` (valid options: {options})")]
    UnknownName {
        kind: &'static str,
        value: String,
        options: String,
    },

    #[error("expression error in `{expr}`: {reason}")]
    Expression { expr: String, reason: String },

    #[error("unsupported by the oracle: {0}")]
    OracleUnsupported(String),

    #[error("cannot fit scaling law: {0}")]
    Fit(String),

    #[error("config error on line {line}: {reason}")]
    Config { line: usize, reason: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed table: {0}")]
    Table(String),

    /// Command line usage error, already formatted.
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
