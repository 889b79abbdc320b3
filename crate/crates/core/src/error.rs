use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or inconsistent user input.
    #[error("input error: {0}")]
    Input(String),
    /// Division by zero or a non-finite float result.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
    /// Input outside the supported fragment (wide X-program rows, grid mismatch).
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// An operation was called outside its precondition.
    #[error("contract violation: {0}")]
    Contract(String),
    /// A brute-force oracle refused an input larger than its budget.
    #[error("oracle budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Unsupported(_) | Error::Budget(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
