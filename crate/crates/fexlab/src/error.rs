use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cycle detected between {0} and {1}")]
    CycleDetected(String, String),
    #[error("unknown label {0}")]
    UnknownLabel(String),
    #[error("duplicate label {0}")]
    DuplicateLabel(String),
    #[error("not a subposet: {0}")]
    NotSubposet(String),
    #[error("map is not monotone: {0} <= {1} but images are incomparable")]
    NotMonotone(String, String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("search budget of {0} nodes exhausted")]
    BudgetExceeded(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("exactness violated: {0}")]
    ExactnessViolated(String),
    #[error("not a map: {0}")]
    NotAMap(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("cap too small: {0}")]
    CapTooSmall(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
