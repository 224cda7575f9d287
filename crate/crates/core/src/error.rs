use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring context mismatch: {0}")]
    Context(String),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("prime {0} divides a coefficient denominator")]
    BadPrime(u64),
    #[error("degree error: {0}")]
    Degree(String),
    #[error("degenerate vector field: {0}")]
    DegenerateField(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("vacuous query: {0}")]
    VacuousQuery(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(
        "extactic does not vanish identically; no first integral can be extracted from this system"
    )]
    ExtacticNonzero,
    #[error("first integral extraction failed: {0}")]
    FirstIntegral(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("resource guard: {0}")]
    ResourceGuard(String),
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
}
