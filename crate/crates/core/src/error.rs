use thiserror::Error;

/// Errors returned by every fallible operation in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("resolution too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("constraint violation: {message}")]
    ConstraintViolation {
        message: String,
        /// Offending index pairs, when the violation is pairwise.
        pairs: Vec<(usize, usize)>,
    },
    #[error("construction failed: {0}")]
    ConstructionFailed(String),
    #[error("band exceeded: {0}")]
    BandExceeded(String),
    #[error("domain too small: {0}")]
    DomainTooSmall(String),
    #[error("accuracy failure: {0}")]
    AccuracyFailure(String),
    #[error("singularity: {0}")]
    Singularity(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        LabError::InvalidArgument(msg.into())
    }

    pub fn is_constraint_violation(&self) -> bool {
        matches!(self, LabError::ConstraintViolation { .. })
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for LabError {
    fn from(e: serde_json::Error) -> Self {
        LabError::Parse(e.to_string())
    }
}

impl From<csv::Error> for LabError {
    fn from(e: csv::Error) -> Self {
        LabError::Parse(e.to_string())
    }
}
