use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unknown term `{0}`")]
    UnknownTerm(String),

    #[error("duplicate document label `{0}`")]
    DuplicateLabel(String),

    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,

    #[error("empty corpus: {0}")]
    EmptyCorpus(String),

    #[error("document has no in-vocabulary tokens")]
    NoKnownTokens,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unknown title `{name}`{}", suggestion_suffix(.suggestions))]
    UnknownTitle { name: String, suggestions: Vec<String> },

    #[error("archive format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("archive holds a {found} model, expected {expected}")]
    KindMismatch { found: String, expected: String },

    #[error("corrupt archive: {0}")]
    CorruptArchive(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("parse error in {path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

fn suggestion_suffix(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!("; closest matches: {}", suggestions.join(", "))
    }
}
