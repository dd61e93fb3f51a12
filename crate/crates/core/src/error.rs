use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("{qubits} qubits exceeds the {what} limit of {limit}")]
    TooManyQubits {
        what: &'static str,
        qubits: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("lanczos did not converge after {iterations} iterations (best estimate {best_estimate}, residual {residual:e})")]
    NotConverged {
        best_estimate: f64,
        residual: f64,
        iterations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
