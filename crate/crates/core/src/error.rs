use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// The input data cannot be processed as given (e.g. missing samples
    /// where a fully observed series is required).
    #[error("{0}")]
    Data(String),

    /// A request would exceed a configured resource limit.
    #[error("{0}")]
    Resource(String),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("non-uniform time grid at row {row}: {message}")]
    NonUniformGrid { row: usize, message: String },

    #[error("no data rows in {0}")]
    Empty(PathBuf),

    /// Malformed simulation recipe.
    #[error("recipe line {line}: {message}")]
    Config { line: usize, message: String },

    /// Bad command-line usage.
    #[error("{0}")]
    Usage(String),

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
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Short machine-parsable category, used as the prefix of CLI diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain-error",
            Error::Data(_) => "data-error",
            Error::Resource(_) => "resource-error",
            Error::Parse { .. } | Error::Csv { .. } => "parse-error",
            Error::NonUniformGrid { .. } => "grid-error",
            Error::Empty(_) => "empty-input",
            Error::Config { .. } => "config-error",
            Error::Io { .. } => "io-error",
            Error::Usage(_) => "usage-error",
        }
    }
}
