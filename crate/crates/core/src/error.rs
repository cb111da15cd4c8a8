use thiserror::Error;

/// Errors raised by the algebra and arc machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("undeclared variable `{name}` at column {column}")]
    UndeclaredVariable { name: String, column: usize },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),

    #[error("series precision mismatch: {left} vs {right}")]
    PrecisionMismatch { left: usize, right: usize },

    #[error("Groebner step budget exceeded after {steps} reduction steps")]
    BudgetExceeded { steps: u64 },

    #[error("Groebner basis failed the S-polynomial audit")]
    AuditFailed,

    #[error("declared codimension {declared} but V(G) has codimension {actual}")]
    CodimMismatch { declared: usize, actual: i64 },

    #[error("arc does not lie on the variety: {0}")]
    ArcNotOnVariety(String),

    #[error("precision exhausted before any pivot was found")]
    PrecisionExhausted,

    #[error("join with the zero covector is undefined")]
    ZeroCovector,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
