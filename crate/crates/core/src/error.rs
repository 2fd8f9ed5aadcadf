use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown stemming mode `{0}` (expected `light` or `heavy`)")]
    UnknownMode(String),
    #[error("invalid stemmer configuration: {0}")]
    Invalid(String),
    #[error("invalid grading policy: {0}")]
    Policy(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    /// The model answer has no words left after stop-word removal and
    /// stemming. This is a content problem with the exam, not the student.
    #[error("model answer reduces to no stems")]
    EmptyModelAnswer,
    #[error(transparent)]
    Config(#[from] ConfigError),
}

impl ConfigError {
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::UnknownMode(_) => "unknown_mode",
            ConfigError::Invalid(_) => "invalid_config",
            ConfigError::Policy(_) => "invalid_policy",
        }
    }
}

impl GradeError {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            GradeError::EmptyModelAnswer => "empty_model_answer",
            GradeError::Config(e) => e.code(),
        }
    }
}
