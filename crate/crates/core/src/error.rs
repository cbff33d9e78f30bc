use thiserror::Error;

/// Everything that can go wrong while building or checking an algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable sets differ: {0:?} vs {1:?}")]
    VarSetMismatch(Vec<String>, Vec<String>),
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("negative power of a polynomial with {0} terms")]
    NegativePowerOfSum(usize),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("replacement for `{0}` is not a monomial")]
    NotMonomial(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("rank parameter must satisfy n >= 2, got {0}")]
    InvalidRank(usize),
    #[error("signature mismatch: `{0}` vs `{1}`")]
    SignatureMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("slot supports overlap in slots {0:?}")]
    SlotOverlap(Vec<usize>),
    #[error("lambda is bound to zero but ladder depth {0} needs lambda^{{1-k}}")]
    ZeroLambda(usize),
    #[error("variable `{0}` is still unbound")]
    UnboundVariable(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
