use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller broke an operation's precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("H^1(O({0})) vanishes; no nonzero class exists")]
    NoNonzeroClass(String),

    #[error("divisor {0} admits no split into degrees g-2 and g-1")]
    NoValidSplit(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    #[error("no nonzero class found within {0} candidate tails")]
    TailBudgetExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
