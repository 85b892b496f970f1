use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-rectangular result matrix: {0}")]
    NonRectangular(String),
    #[error("empty sample")]
    EmptySample,
    #[error("not enough data: {0}")]
    TooFew(String),
}

pub type Result<T> = std::result::Result<T, Error>;
