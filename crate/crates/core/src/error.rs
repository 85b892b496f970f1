use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bounds: {0}")]
    InvalidBounds(String),
    #[error("logistic orbit collapsed: {0}")]
    CollapsedOrbit(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("evaluation budget exceeded: fes={fes}, fes_max={fes_max}")]
    BudgetExceeded { fes: usize, fes_max: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("covariance estimation needs at least 2 archive entries, got {0}")]
    ArchiveTooSmall(usize),
    #[error("covariance matrix has non-finite entries")]
    NonFiniteCovariance,
    #[error("population too small: {0}")]
    PopulationTooSmall(String),
}

pub type Result<T> = std::result::Result<T, Error>;
