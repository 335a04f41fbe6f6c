use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numeric failure: {msg} (last estimates {last:e} and {previous:e})")]
    NumericFailure { msg: String, last: f64, previous: f64 },
    #[error("poisoned integral: non-finite value {value} at node {node:?}")]
    Poisoned { node: Vec<f64>, value: f64 },
    #[error("symbolic path unavailable: {0}; use the numeric evaluators instead")]
    SymbolicUnavailable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("parse error at column {column}: {msg}")]
    Parse { column: usize, msg: String },
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
