use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown symbol `{name}` at position {position}")]
    UnknownSymbol { name: String, position: usize },
    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),
    #[error("exponent overflow")]
    ExponentOverflow,
    #[error("generator {0} is outside the algebra's declared range")]
    InvalidGenerator(String),
    #[error("generator {0} lies outside the window")]
    OutOfWindow(String),
    #[error("structure constants do not define a Lie algebra: {0}")]
    NotLie(String),
    #[error("{0} has infinite rank; this operation needs a finite presentation")]
    InfiniteRank(String),
    #[error("invalid algebra spec: {0}")]
    SpecFile(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
