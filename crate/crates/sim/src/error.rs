use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SimError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Core(#[from] stirap_core::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0} verification check(s) failed")]
    Verification(usize),
}

impl SimError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        SimError::Io { path: path.into(), source }
    }

    /// Process exit code: 1 for bad input, 2 for numerical failure, 3 for a
    /// failed verification.
    pub fn exit_code(&self) -> i32 {
        use stirap_core::Error as E;
        match self {
            SimError::Core(E::Instability { .. } | E::NumericalFailure { .. } | E::ZeroNorm) => 2,
            SimError::Verification(_) => 3,
            _ => 1,
        }
    }
}
