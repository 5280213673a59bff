use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("field mismatch")]
    FieldMismatch,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("degenerate form: radical has dimension {0}")]
    Degenerate(usize),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not a similitude: {0}")]
    NotSimilitude(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    /// Exit status used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::DimensionMismatch { .. }
            | Error::FieldMismatch
            | Error::Precondition(_)
            | Error::NotSimilitude(_)
            | Error::Degenerate(_)
            | Error::DivisionByZero => 1,
            Error::Unsupported(_) | Error::Budget(_) | Error::Internal(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::FieldMismatch => "field_mismatch",
            Error::Unsupported(_) => "unsupported",
            Error::Degenerate(_) => "degenerate",
            Error::Budget(_) => "budget",
            Error::Precondition(_) => "precondition",
            Error::NotSimilitude(_) => "not_similitude",
            Error::DivisionByZero => "division_by_zero",
            Error::Parse(_) => "parse",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
