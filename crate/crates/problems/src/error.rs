use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown benchmark family {0:?}")]
    UnknownFamily(String),
    #[error("unknown problem {0:?}")]
    UnknownProblem(String),
    #[error("{family} does not support D={dim}: {reason}")]
    UnsupportedDimension {
        family: String,
        dim: usize,
        reason: String,
    },
    #[error("invalid transform: {0}")]
    InvalidTransform(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
