use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, received {received}")]
    DimensionMismatch { expected: usize, received: usize },

    #[error("function id {0} out of range, valid ids are 1..=24")]
    FunctionIdOutOfRange(u32),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("problem {index}: generation failed after {attempts} attempts, last rejection: {reason}")]
    GenerationExhausted {
        index: u64,
        attempts: u32,
        reason: String,
    },

    #[error("non-finite objective value for {problem} at sample row {row}")]
    NonFiniteObjective { problem: String, row: usize },

    #[error("tree parse error: {0}")]
    TreeParse(String),

    #[error("column mismatch: {0}")]
    ColumnMismatch(String),

    #[error("only {surviving} feature columns survive cleaning, at least 3 are required")]
    TooFewColumns { surviving: usize },

    #[error("matrix is numerically zero")]
    ZeroMatrix,

    #[error("non-finite value in feature matrix at row {row}, column {column}")]
    NonFiniteFeature { row: usize, column: String },

    #[error("perplexity {perplexity} is infeasible for {n} points, maximum allowed is {max}")]
    Perplexity { perplexity: f64, n: usize, max: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{path}: expected digest {expected}, {found}")]
    Digest {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: String,
        source: Box<Error>,
    },
}

impl Error {
    /// Whether the error stems from invalid user input rather than a runtime failure.
    pub fn is_validation(&self) -> bool {
        match self {
            Error::InvalidConfig(_)
            | Error::FunctionIdOutOfRange(_)
            | Error::DimensionMismatch { .. }
            | Error::Perplexity { .. }
            | Error::InvalidInput(_) => true,
            Error::Stage { source, .. } => source.is_validation(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
