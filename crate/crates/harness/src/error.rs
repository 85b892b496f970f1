use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration; a usage error for the caller.
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] mco_core::Error),
    #[error(transparent)]
    Problem(#[from] mco_problems::Error),
    #[error(transparent)]
    Stats(#[from] mco_stats::Error),
    #[error("io error: {0}")]
    Io(String),
    #[error("malformed results: {0}")]
    Format(String),
    #[error("results schema version {found}, this build reads {expected}")]
    Schema { found: u32, expected: u32 },
}

impl Error {
    /// Whether the failure stems from user input rather than a run.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Config(_) | Error::Problem(_) | Error::Schema { .. } | Error::Format(_) | Error::Stats(_)
        )
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        Error::Io(format!("{}: {e}", path.display()))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
