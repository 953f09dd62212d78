use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("representation mismatch: expected {expected} field")]
    Representation { expected: &'static str },

    #[error("non-finite value produced by the {term} term at t = {t}")]
    NonFinite { term: &'static str, t: f64 },

    #[error("root finding did not converge after {iterations} bisections")]
    NoConvergence { iterations: usize },

    #[error("eigensolver failed on a {dim}x{dim} matrix (frobenius norm {frobenius:.3e}, condition estimate {condition:.3e})")]
    Eigensolver {
        dim: usize,
        frobenius: f64,
        condition: f64,
    },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("config error at line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("bad field file {path:?}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
