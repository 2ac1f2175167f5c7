use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("radicand mismatch: sqrt({0}) vs sqrt({1})")]
    RadicandMismatch(u64, u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid rational `{0}`")]
    Rational(String),
    #[error("invalid field element `{0}`: expected `a/b,c/d`")]
    FieldElement(String),
    #[error("invalid continued fraction `{0}`: expected `[e1; e2; ...]`")]
    ContinuedFraction(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("m = {0} is not a squarefree integer >= 2")]
    BadRadicand(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("quotient is not integral")]
    NotDivisible,
    #[error("element must be integral and nonzero")]
    NotIntegralNonzero,
    #[error("ideal of norm {norm} has no generator: class number is not 1")]
    NotPrincipal { norm: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProveError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("class number of Q(sqrt({0})) is not 1")]
    ClassNumberNotOne(u64),
    #[error("inconclusive: depth cap {cap} exceeded at box {path:?}")]
    DepthExceeded { cap: u32, path: String },
    #[error("inconclusive: box budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("invalid schedule: {0}")]
    BadSchedule(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

impl ProveError {
    /// Budget or depth exhaustion: says nothing about the field itself.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, ProveError::DepthExceeded { .. } | ProveError::BudgetExhausted { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfracError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("numerator and denominator must be integral")]
    NotIntegral,
    #[error("no certificate region contains the reduced quotient {0}")]
    NoRegion(String),
    #[error("zero tail at index {0}: reciprocal of 0")]
    ZeroTail(usize),
    #[error("empty continued fraction")]
    Empty,
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
