use std::path::PathBuf;

use tashih_core::GradeError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{kind} `{id}` not found")]
    NotFound { kind: &'static str, id: String },
    #[error("{0}")]
    Conflict(String),
    #[error("question already answered by this student")]
    DuplicateAnswer,
    #[error("submission `{0}` has already been reviewed")]
    AlreadyReviewed(String),
    #[error("{message}")]
    Invalid { code: &'static str, message: String },
    #[error(transparent)]
    Grade(#[from] GradeError),
    #[error("{}:{line}: {message}", path.display())]
    Corrupt {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl StoreError {
    pub(crate) fn not_found(kind: &'static str, id: impl Into<String>) -> Self {
        StoreError::NotFound { kind, id: id.into() }
    }

    pub(crate) fn invalid(code: &'static str, message: impl Into<String>) -> Self {
        StoreError::Invalid {
            code,
            message: message.into(),
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            StoreError::NotFound { .. } => "not_found",
            StoreError::Conflict(_) => "conflict",
            StoreError::DuplicateAnswer => "duplicate_answer",
            StoreError::AlreadyReviewed(_) => "already_reviewed",
            StoreError::Invalid { code, .. } => code,
            StoreError::Grade(e) => e.code(),
            StoreError::Corrupt { .. } => "corrupt_store",
            StoreError::Io(_) => "io_error",
            StoreError::Json(_) => "serialization_error",
        }
    }
}
