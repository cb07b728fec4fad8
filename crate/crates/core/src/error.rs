use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("unbounded: {0}")]
    Unbounded(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
