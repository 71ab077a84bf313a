use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("unsupported parameter: {0}")]
    Unsupported(String),
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("group mismatch: {0}")]
    Mismatch(String),
    #[error("ill-defined character: {0}")]
    IllDefined(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
