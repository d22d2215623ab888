use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvError {
    #[error("generation failed for {variant} after {attempts} attempts")]
    GenerationFailed { variant: String, attempts: usize },
    #[error("layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("bad variant `{input}`: {reason}")]
    BadVariant { input: String, reason: String },
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("state json: {0}")]
    Json(String),
}
