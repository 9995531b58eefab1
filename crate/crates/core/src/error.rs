use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum BbError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("empty search domain: {0}")]
    EmptySearch(String),
    #[error("unknown library function tag: {0}")]
    UnknownTag(String),
    #[error("zero pairing: |({0})| below tolerance, not a synthesis window")]
    ZeroPairing(String),
    #[error("hypothesis violated on the check grid: {0}")]
    HypothesisViolation(String),
    #[error("divergent quantity: {0}")]
    Divergent(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("memory guard exceeded: {0}")]
    MemoryGuard(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, BbError>;
