use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A request exceeds the sizes this crate materializes in memory.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Malformed sentence text.
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    /// Sentence text that is well-formed but not a canonical disentangled form.
    #[error("semantic error: {0}")]
    Semantic(String),

    /// Malformed serialized data (token streams, JSON documents).
    #[error("format error: {0}")]
    Format(String),

    /// A matrix or state failed validation.
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Party indices or cuts that do not fit the state.
    #[error("invalid party set: {0}")]
    InvalidParties(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by bad input rather than by the machinery.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Numerical(_) | Error::Io(_))
    }
}
