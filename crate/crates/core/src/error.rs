use thiserror::Error;

/// Errors raised by the algebra, cohomology and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus mismatch: {0}")]
    ModulusMismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("variable roster mismatch: {0}")]
    RosterMismatch(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("input is not closed: {0}")]
    NotClosed(String),
    #[error("insufficient precision: {0}")]
    Precision(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported complex: {0}")]
    UnsupportedSpec(String),
    #[error("not a chain map: {0}")]
    InvalidMap(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("form outside the computable window: {0}")]
    Window(String),
    #[error("invalid cover: {0}")]
    Cover(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
