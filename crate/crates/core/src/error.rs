use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A caller broke an operation's precondition (sizes, arities).
    #[error("contract violation: {0}")]
    Contract(String),
    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Two vertices of a generated tree coincide.
    #[error("degenerate tree: vertices {first} and {second} coincide at {value}")]
    Degenerate {
        first: String,
        second: String,
        value: String,
    },
    /// A strategy tree failed validation where a valid one was required.
    #[error("invalid strategy tree: {}", summarize(.0))]
    InvalidTree(Box<crate::strategy::ValidationReport>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("game state error: {0}")]
    GameState(String),
    #[error("strategy violated: {0}")]
    StrategyViolated(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("parse error: {0}")]
    Parse(String),
    /// A computed result failed its own verification.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

fn summarize(report: &crate::strategy::ValidationReport) -> String {
    report
        .failures
        .iter()
        .map(|f| f.detail.as_str())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Coarse grouping used by front ends to pick exit codes and status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Conflict,
    Internal,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::IllegalMove(_) | Error::GameState(_) => ErrorClass::Conflict,
            Error::Internal(_) | Error::StrategyViolated(_) => ErrorClass::Internal,
            _ => ErrorClass::Domain,
        }
    }
}
