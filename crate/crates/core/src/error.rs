use thiserror::Error;

/// Broad failure classes. The CLI maps each onto a fixed exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Validation,
    Domain,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),
    #[error("edge references unknown node `{0}`")]
    UnknownNode(String),
    #[error("self-loop on node `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{0}`-`{1}`")]
    DuplicateEdge(String, String),
    #[error("node `{id}` has non-positive alpha {alpha}")]
    NonPositiveAlpha { id: String, alpha: f64 },
    #[error("edge `{u}`-`{v}` has non-positive weight {weight}")]
    NonPositiveWeight { u: String, v: String, weight: f64 },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("invalid integration task: {0}")]
    InvalidTask(String),
    #[error("duplicate requirement ids: {}", .0.join(", "))]
    DuplicateRequirements(Vec<String>),
    #[error("line {line}: malformed requirement id `{token}`")]
    MalformedId { line: usize, token: String },
    #[error("invalid reference pattern `{pattern}`: {reason}")]
    BadPattern { pattern: String, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Domain(_) | Error::NotSymmetric { .. } => ErrorKind::Domain,
            Error::Usage(_) => ErrorKind::Usage,
            _ => ErrorKind::Validation,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
