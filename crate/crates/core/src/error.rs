use thiserror::Error;

use crate::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("expected a function, found a term of type {0}")]
    NotAFunction(Type),
    #[error("argument of type {found} where {expected} was expected")]
    ArgumentMismatch { expected: Type, found: Type },
    #[error("expected a formula, found a term of type {0}")]
    NotAFormula(Type),
    #[error("terms have different types {0} and {1}")]
    Mismatch(Type, Type),
    #[error("undeclared variable `{0}`")]
    Undeclared(String),
    #[error("context hole expects type {expected}, got {found}")]
    HoleMismatch { expected: Type, found: Type },
}

/// The standard denotation of a type exceeds the configured guard.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type {ty} has too many values (limit {limit})")]
pub struct TooLarge {
    pub ty: Type,
    pub limit: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

/// Errors surfaced by the front end: anything that can go wrong reading a
/// source file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("type error: {0}")]
    Type(#[from] TypeError),
    #[error(transparent)]
    TooLarge(#[from] TooLarge),
}
