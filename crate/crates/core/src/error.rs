use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation overflow at bound {bound}: {path}")]
    Truncation { bound: usize, path: String },
    #[error("degree guard: degree {degree} needs depth >= {needed}, got {depth}")]
    DegreeGuard { degree: usize, depth: usize, needed: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Precondition(_) => 1,
            Error::Parse(_) => 2,
            Error::Truncation { .. } => 3,
            Error::DegreeGuard { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Validation(msg.into()))
}
