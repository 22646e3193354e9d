use std::path::Path;

use serde::Serialize;
use thiserror::Error;

/// Fixed exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// `baseline check` raised at least one flag.
    pub const FLAGGED: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const DOMAIN: i32 = 4;
    pub const IO: i32 = 5;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Usage,
    Validation,
    Domain,
    Io,
}

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub category: Category,
    pub message: String,
    pub details: Vec<String>,
}

impl CliError {
    pub fn new(category: Category, message: impl Into<String>) -> Self {
        CliError {
            category,
            message: message.into(),
            details: Vec::new(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Category::Usage, message)
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(Category::Validation, message)
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(Category::Io, format!("{}: {err}", path.display()))
    }

    pub fn with_context(mut self, ctx: &str) -> Self {
        self.message = format!("{ctx}: {}", self.message);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.category {
            Category::Usage => exit::USAGE,
            Category::Validation => exit::VALIDATION,
            Category::Domain => exit::DOMAIN,
            Category::Io => exit::IO,
        }
    }

    /// Single-line JSON record for stderr.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Record<'a> {
            error: Category,
            code: i32,
            message: &'a str,
            #[serde(skip_serializing_if = "<[String]>::is_empty")]
            details: &'a [String],
        }
        serde_json::to_string(&Record {
            error: self.category,
            code: self.exit_code(),
            message: &self.message,
            details: &self.details,
        })
        .expect("error record serializes")
    }
}

impl From<reqplex::Error> for CliError {
    fn from(e: reqplex::Error) -> Self {
        let category = match e.kind() {
            reqplex::ErrorKind::Usage => Category::Usage,
            reqplex::ErrorKind::Validation => Category::Validation,
            reqplex::ErrorKind::Domain => Category::Domain,
        };
        let details = match &e {
            reqplex::Error::DuplicateRequirements(ids) => ids.clone(),
            _ => Vec::new(),
        };
        CliError {
            category,
            message: e.to_string(),
            details,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
