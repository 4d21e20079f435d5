use thiserror::Error;

/// Errors raised by the library. Each variant maps onto one failure class
/// that the command-line front end reports with a distinct exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Coordinate count outside the supported model.
    #[error("invalid n={n}: {constraint}")]
    InvalidN { n: u32, constraint: &'static str },

    /// An argument violates an operation's precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The requested work exceeds a configured enumeration budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Malformed pattern file.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Serialization or I/O failure while writing results.
    #[error("output error: {0}")]
    Output(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}
