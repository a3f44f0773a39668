use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by geometry, metric, loss and deformation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("point dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coordinate buffer length {len} is not a multiple of dimension {dim}")]
    RaggedCoordinates { len: usize, dim: usize },
    #[error("non-finite coordinate in point {index}")]
    NonFinite { index: usize },
    #[error("need at least {needed} points, found {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("face {face}: {reason}")]
    InvalidFace { face: usize, reason: String },
    #[error("{what} index {index} out of range (len {len})")]
    IndexOutOfRange { what: &'static str, index: usize, len: usize },
    #[error("degenerate mesh: {0}")]
    DegenerateMesh(String),
    #[error("set sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("set size {n} exceeds the exact EMD cap of {cap}")]
    EmdCapExceeded { n: usize, cap: usize },
    #[error("over-exclusion: {0}")]
    OverExclusion(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite value at iteration {iteration}: {detail}")]
    NumericalFailure { iteration: usize, detail: String },
    #[error("{path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
