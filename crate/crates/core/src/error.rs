use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = QuboError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QuboError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("problem dimension must be at least 1")]
    EmptyInstance,

    #[error("index ({i}, {j}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("entry ({i}, {j}) lies below the diagonal")]
    LowerTriangle { i: usize, j: usize },

    #[error("coefficient at ({i}, {j}) is not finite")]
    NonFinite { i: usize, j: usize },

    #[error("bit vector entry {index} is {value}, expected 0 or 1")]
    InvalidBit { index: usize, value: u8 },

    #[error("n = {n} exceeds the enumeration limit of {limit} variables")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("scaling factor must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("energy function is constant; no spectral gap exists")]
    NoSpectralGap,

    #[error("instance has fewer than two distinct coefficient values")]
    Degenerate,

    #[error("entry ({i}, {j}) cannot be modified")]
    NotModifiable { i: usize, j: usize },

    #[error("relative deviation is undefined for a zero reference energy")]
    ZeroReference,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl QuboError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        QuboError::Io { path: path.into(), source }
    }
}
