use std::path::PathBuf;

use thiserror::Error;

/// Matrix axis named in dimension errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Features / terms (D).
    Rows,
    /// Documents (N).
    Cols,
    /// Factorization rank (K).
    Rank,
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Rows => write!(f, "rows (D)"),
            Axis::Cols => write!(f, "columns (N)"),
            Axis::Rank => write!(f, "rank (K)"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch on {axis}: expected {expected}, found {found}")]
    DimensionMismatch {
        axis: Axis,
        expected: usize,
        found: usize,
    },

    #[error("matrix has a negative or non-finite entry {value} at ({row}, {col})")]
    InvalidEntry { row: usize, col: usize, value: f64 },

    #[error("matrix is empty ({rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("rank {k} out of range: must satisfy 1 <= K <= {max}")]
    InvalidRank { k: usize, max: usize },

    #[error("kernel bandwidth must be positive, got {0}")]
    InvalidBandwidth(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("corpus has no usable tokens after preprocessing")]
    NoTokens,

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("duplicate document id {0:?}")]
    DuplicateId(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("no topic has at least {min_docs} documents")]
    NoTopicsLeft { min_docs: usize },

    #[error("requested {requested} topics but corpus only has {available}")]
    TooFewTopics { requested: usize, available: usize },

    #[error("label lists differ in length: {predicted} predicted vs {truth} truth")]
    LabelLengthMismatch { predicted: usize, truth: usize },

    #[error("label {label} out of range for {k} classes")]
    LabelOutOfRange { label: usize, k: usize },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("k-means needs k <= number of points, got k={k}, points={points}")]
    TooManyClusters { k: usize, points: usize },

    #[error("vocabulary of {vocab} terms cannot give {topics} topics two signature terms each")]
    VocabularyTooSmall { vocab: usize, topics: usize },

    #[error("no records to report")]
    NoRecords,

    #[error("i/o error on {path}: {source}")]
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

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
