use thiserror::Error;

use crate::io::arff::ArffError;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("incompatible label spaces: {left} labels vs {right} labels")]
    UniverseMismatch { left: usize, right: usize },

    #[error("label index {index} out of range for a universe of {universe} labels")]
    LabelOutOfRange { index: usize, universe: usize },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("feature vector has {got} values, schema expects {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("invalid schema: {0}")]
    Schema(String),

    #[error(transparent)]
    Arff(#[from] ArffError),

    #[error("label binding failed: {0}")]
    LabelBinding(String),

    #[error("invalid split: {0}")]
    Split(String),

    #[error("invalid learner configuration: {0}")]
    Learner(String),

    #[error("invalid transform configuration: {0}")]
    Transform(String),

    #[error("pruning with p = {p} leaves no training rows")]
    OverPruned { p: usize },

    #[error("invalid ensemble configuration: {0}")]
    Ensemble(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("metric `{0}` is undefined: every instance was skipped")]
    UndefinedMetric(&'static str),

    #[error("invalid score {value} for label {label}: scores must lie in [0, 1]")]
    InvalidScore { label: usize, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl AsRef<std::path::Path>, err: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            message: err.to_string(),
        }
    }
}
