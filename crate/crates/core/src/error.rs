use thiserror::Error;

/// Errors surfaced by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A hard size limit that protects an exponential routine.
    #[error("resource guard: {0}")]
    ResourceGuard(String),

    #[error("budget exceeded: the request needs {required} units but the limit is {limit}")]
    BudgetExceeded { required: u128, limit: u128 },

    #[error("malformed transcript at line {line}: {message}")]
    Malformed { line: usize, message: String },

    /// Output failed after `lines_written` complete lines reached the sink.
    #[error("write failed after {lines_written} complete lines: {source}")]
    PartialWrite {
        lines_written: u64,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
