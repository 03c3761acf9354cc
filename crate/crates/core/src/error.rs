use thiserror::Error;

use crate::numeric::Backend;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("backend mismatch: {0:?} vs {1:?}")]
    BackendMismatch(Backend, Backend),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("composite violates item {item}: {detail}")]
    Composition { item: &'static str, detail: String },
    #[error("scenario invariant violated: {0}")]
    Scenario(String),
    #[error("certificate failed to verify: {0}")]
    Certificate(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
