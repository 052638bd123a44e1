use std::path::PathBuf;

use shimura_core::ErrorKind;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("{0}: {1}")]
    Io(PathBuf, std::io::Error),
    #[error("{0}: {1}")]
    Json(PathBuf, serde_json::Error),
    #[error(transparent)]
    Core(#[from] shimura_core::Error),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl LabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        LabError::Invalid(msg.into())
    }

    /// 2 for validation errors, 3 for unsupported cases.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Core(e) if e.kind() == ErrorKind::Unsupported => 3,
            LabError::Unsupported(_) => 3,
            _ => 2,
        }
    }
}
