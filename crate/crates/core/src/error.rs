use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The ratio point coincides with the second focus.
    #[error("ratio undefined: point coincides with focus B")]
    DegenerateRatio,

    #[error("Apollonius foci coincide")]
    CoincidentFoci,

    #[error("distance ratio must be positive and finite, got {0}")]
    InvalidRatio(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least {required} points are required, got {found}")]
    TooFewPoints { required: usize, found: usize },

    #[error("no target can be selected: every score is zero")]
    EmptySelection,

    #[error("target count {count} is outside 1..={n}")]
    InvalidTargetCount { count: usize, n: usize },

    /// Only one target exists, so no pairing is possible.
    #[error("a single target cannot be paired")]
    SingleTarget,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("{path}: dataset has no rows")]
    EmptyDataset { path: PathBuf },

    #[error("{path}: row {row}, column {column}: `{value}` is not numeric")]
    NonNumericFeature {
        path: PathBuf,
        row: usize,
        column: usize,
        value: String,
    },

    #[error("{path}: row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },

    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },

    #[error("cannot plot {dim}-dimensional result; pass --project to plot the first two features")]
    Dimension { dim: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
