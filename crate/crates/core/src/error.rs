use thiserror::Error;

use crate::kernel::SimpleType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unbound variable #{index} at {path}")]
    UnboundVariable { index: usize, path: String },
    #[error("type mismatch at {path}: expected {expected}, found {found}")]
    TypeMismatch {
        expected: String,
        found: String,
        path: String,
    },
    #[error("ill-typed term: {0}")]
    IllTyped(String),
    #[error("type disagreement: {left} vs {right}")]
    TypeDisagreement { left: SimpleType, right: SimpleType },
    #[error("size overflow: {0}")]
    SizeOverflow(String),
    #[error("resource budget of {budget} exhausted during {what}")]
    ResourceExhausted { what: &'static str, budget: u64 },
    #[error("operation cancelled")]
    Cancelled,
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("letter `{letter}` expects {expected} children, got {found}")]
    ArityMismatch {
        letter: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("value does not live in the expected space: {0}")]
    SpaceMismatch(String),
    #[error("cannot lower the state count from {from} to {to}")]
    StateCountDecrease { from: u32, to: u32 },
    #[error("this operation needs definable-value sets, but no provider was given")]
    NormalizationNeedsDefs,
    #[error("no witness found within a budget of {0}")]
    BudgetExhausted(u64),
    #[error("not a word type: {0}")]
    NotWordType(SimpleType),
    #[error("not a tree type: {0}")]
    NotTreeType(SimpleType),
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed input: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn ill_typed(msg: impl Into<String>) -> Self {
        Error::IllTyped(msg.into())
    }

    pub(crate) fn overflow(msg: impl Into<String>) -> Self {
        Error::SizeOverflow(msg.into())
    }

    pub(crate) fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }
}
