use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot decode image {path}: {reason}")]
    Decode { path: PathBuf, reason: String },
    #[error("image is {height}x{width}; both sides must be at least {min}")]
    TooSmall { height: usize, width: usize, min: usize },
    #[error("cannot read directory {path}: {reason}")]
    UnreadableDirectory { path: PathBuf, reason: String },
    #[error("no samples found under {0}")]
    EmptyDataset(PathBuf),
    #[error("grid of {rows}x{cols} is too small to decompose")]
    DegenerateGrid { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("{rows}x{cols} input cannot be decomposed to {levels} levels")]
    TooShallow { rows: usize, cols: usize, levels: usize },
    #[error("index undefined for fewer than two pixels")]
    UndefinedForSinglePixel,
    #[error("non-finite wavelet coefficient")]
    NonFiniteCoefficient,
    #[error("gray level {value} out of range for {bins} levels")]
    LevelOutOfRange { value: u32, bins: u32 },
    #[error("training set is empty")]
    EmptyTrainingSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not enough samples to split: {0}")]
    ClassTooSmall(String),
    #[error("covariance matrix is singular")]
    SingularCovariance,
    #[error("AUC undefined: no class has both positive and negative samples")]
    SingleClassAucUndefined,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed feature table: {0}")]
    FeatureTable(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
