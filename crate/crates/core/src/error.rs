use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("no trail found: {0}")]
    NotFound(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("incomplete assignment: variable `{0}` has no value")]
    IncompleteAssignment(String),

    #[error("zero correlation has no finite sample requirement")]
    ZeroCorrelation,

    #[error("integrity failure: {0}")]
    Integrity(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
