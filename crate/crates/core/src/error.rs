//! Error type shared across the crate.

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum DenoiseError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("unsupported image format: {0}")]
    Format(String),

    #[error("intensity {value} at index {index} outside [0,1]")]
    IntensityRange { index: usize, value: f64 },

    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("image too small: need at least {min}x{min}, got {height}x{width}")]
    ImageTooSmall {
        height: usize,
        width: usize,
        min: usize,
    },

    #[error("width must be even, got {0}")]
    OddWidth(usize),

    #[error("grid has odd pixel count: {0}x{1}")]
    OddArea(usize, usize),

    #[error("invalid direction offset ({0},{1})")]
    InvalidDirection(i64, i64),

    #[error("assignment instance is infeasible")]
    Infeasible,

    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    #[error("invalid tiling: {0}")]
    InvalidTiling(String),

    #[error("tensor shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("loss mask selects no pixels")]
    EmptyLossMask,

    #[error("training aborted: non-finite loss at iteration {0}")]
    NonFiniteLoss(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("bad checkpoint: {0}")]
    Checkpoint(String),
}

impl DenoiseError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        DenoiseError::Io {
            path: path.into(),
            source,
        }
    }
}
