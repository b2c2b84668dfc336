use crate::rational::Rational;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {q} lies outside the domain [{start}, {end}]")]
    OutOfDomain {
        q: Rational,
        start: Rational,
        end: String,
    },
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("vector has zero coordinate sum")]
    ZeroSum,
    #[error("vector is not sorted ascending and nonnegative")]
    NotSorted,
    #[error("point is not in the ordered simplex: {0}")]
    NotInSimplex(String),
    #[error("system is not proper (first component does not grow)")]
    NotProper,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("estimation window is empty: {0}")]
    EmptyWindow(String),
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("not an n-system: {0}")]
    NotAnNSystem(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid generation policy: {0}")]
    InvalidPolicy(String),
    #[error("no admissible move at step {step} after {attempts} attempts")]
    InfeasibleStep { step: usize, attempts: usize },
    #[error("invalid linear map: {0}")]
    InvalidMap(String),
    #[error("invalid rational {input:?}: {reason}")]
    InvalidRational { input: String, reason: String },
    #[error("parse error at line {line}, column {column}{}: {message}", field.as_ref().map(|f| format!(" (field `{f}`)")).unwrap_or_default())]
    Parse {
        line: usize,
        column: usize,
        field: Option<String>,
        message: String,
    },
}
