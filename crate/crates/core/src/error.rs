use thiserror::Error;

/// Errors raised by the engine.
///
/// Failures of mathematical predicates (a sequence that is not regular, a
/// module that is not reflexive, ...) are reported as data, never as errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible operands: {0}")]
    IncompatibleOperands(String),

    #[error("graded violation: {0}")]
    GradedViolation(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("hypothesis missing: {what}{}", witness.as_ref().map(|w| format!(" (witness: {w})")).unwrap_or_default())]
    HypothesisMissing { what: String, witness: Option<String> },

    #[error("minimal primes are required for {0}")]
    NeedsMinimalPrimes(String),

    #[error("minimal resolution required")]
    MinimalityRequired,

    #[error("insufficient window: {0}")]
    InsufficientWindow(String),

    #[error("oracle too large: {0}")]
    OracleTooLarge(String),

    #[error("unknown theorem id `{0}`")]
    UnknownTheorem(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("guardrail exceeded: {0}")]
    Guardrail(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn hypothesis(what: impl Into<String>) -> Self {
        Error::HypothesisMissing { what: what.into(), witness: None }
    }
}
