use std::io;

/// Errors produced by the model, data pipeline and classifier.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid numeric value: {0}")]
    InvalidNumeric(String),
    #[error("numeric overflow: {0}")]
    NumericOverflow(String),
    #[error("singular linear system: {0}")]
    Singular(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("parse error at row {row}: {msg}")]
    Parse { row: usize, msg: String },
    #[error("data error: {0}")]
    Data(String),
    #[error("bad file format: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn dim(what: &'static str, expected: usize, got: usize) -> Self {
        Error::Dimension {
            what,
            expected,
            got,
        }
    }

    /// Coarse classification used for process exit codes.
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Dimension { .. } | Error::Argument(_) | Error::Config(_) => ErrorKind::Usage,
            Error::InvalidNumeric(_) | Error::NumericOverflow(_) | Error::Singular(_) => {
                ErrorKind::Numeric
            }
            Error::Parse { .. } | Error::Data(_) | Error::Format(_) | Error::Io(_) => {
                ErrorKind::Data
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Data,
    Numeric,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
