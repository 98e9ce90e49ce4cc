use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("non-numeric value `{value}` at line {line}, column `{column}`")]
    NonNumeric { line: usize, column: String, value: String },
    #[error("missing value at line {line}, column `{column}`")]
    MissingValue { line: usize, column: String },
    #[error("duplicate id `{id}` at line {line}")]
    DuplicateId { id: String, line: usize },
    #[error("unsupported file version: {0}")]
    Version(String),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("truncated file: {0}")]
    Truncated(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] outsel_core::Error),
}

impl IoError {
    pub(crate) fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> IoError {
        let path = path.into();
        move |source| IoError::Io { path, source }
    }
}

pub type Result<T, E = IoError> = std::result::Result<T, E>;
