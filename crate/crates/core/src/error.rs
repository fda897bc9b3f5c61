use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("context mismatch: {0}")]
    Context(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("{0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
