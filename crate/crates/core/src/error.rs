use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("matrix {matrix} is not in the family {{{members}}}")]
    NotInFamily { matrix: String, members: String },
    #[error("game {index}: {source}")]
    Game {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
