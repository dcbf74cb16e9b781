use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("matrix shape error: {0}")]
    Shape(String),
    #[error("division by zero or pole at evaluation point")]
    Pole,
    #[error("certification failure: {0}")]
    Certification(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
