//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction, sampling, IO and the solver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite entry at index {0}")]
    NonFiniteEntry(usize),

    #[error("non-real diagonal: entry ({0},{0}) has imaginary part {1:e}")]
    NonRealDiagonal(usize, f64),

    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("unsupported format version {0} (expected 1)")]
    UnsupportedVersion(u32),

    #[error("normalization undefined: ground truth has zero norm")]
    ZeroGroundTruth,

    #[error("solver encountered a non-finite loss at iteration {iter}")]
    NonFiniteLoss {
        iter: usize,
        trace: Box<crate::solver::SolverTrace>,
    },

    #[error("solver diverged: loss grew past {threshold:e} at iteration {iter}")]
    Diverged {
        iter: usize,
        threshold: f64,
        trace: Box<crate::solver::SolverTrace>,
    },

    #[error("covering net failed to reach radius {delta} within the candidate budget")]
    NetConstruction { delta: f64 },

    #[error("degenerate sampling: {0}")]
    DegenerateSampling(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
