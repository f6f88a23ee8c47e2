use thiserror::Error;

/// Errors raised by the model, Monte Carlo and certificate layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("argument {t} outside the domain [{lo}, {hi}] of the log moment generating function")]
    Domain { t: f64, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("{what} exceeds the size guard ({size} > {limit})")]
    Size { what: &'static str, size: u128, limit: u128 },

    #[error("iteration cap of {cap} reached while {what}")]
    Cap { what: &'static str, cap: usize },

    #[error("index {index} outside [0, {len})")]
    Index { index: usize, len: usize },

    #[error("disorder model {0} has no sampler (table MGFs are certificate-only)")]
    UnsupportedSampling(&'static str),

    #[error("invalid disorder table: {0}")]
    Table(String),

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),

    #[error("cannot parse {path}: {msg}")]
    Parse { path: String, msg: String },

    #[error("i/o error on {path}: {msg}")]
    Io { path: String, msg: String },
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), msg: e.to_string() }
    }

    pub(crate) fn parse(path: &std::path::Path, msg: impl ToString) -> Self {
        Error::Parse { path: path.display().to_string(), msg: msg.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
