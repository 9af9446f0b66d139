use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid linear program: {0}")]
    InvalidProgram(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The instance is larger than an exhaustive routine accepts.
    #[error("{what} refuses instances with {size} nodes (limit {limit})")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("linear relaxation is unbounded; optimality cannot be certified")]
    Unbounded,

    #[error("simplex did not terminate within {0} pivots")]
    PivotLimit(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("oracle disagreement: {msg} (instance written to {})", .path.display())]
    OracleMismatch { msg: String, path: PathBuf },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
