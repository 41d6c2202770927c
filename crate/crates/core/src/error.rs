use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {order} vertices")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    DisconnectedGraph,
    #[error("greedy numbering needs more than {bound} numbers")]
    BoundTooSmall { bound: usize },
    #[error("graph is not a forest")]
    NotAForest,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is odd")]
    OddDimension(usize),
    #[error("invalid Gram matrix: {0}")]
    InvalidGram(String),
    #[error("assignment is not a point of the variety")]
    NotOnVariety,
    #[error("sampling exhausted {retries} retries at vertex {vertex}")]
    RetriesExhausted { vertex: usize, retries: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),
    #[error("estimated work {estimate} exceeds cap {cap}")]
    WorkCapExceeded { estimate: String, cap: u64 },
    #[error("no free color while splitting: {0}")]
    InternalConflict(String),
    #[error("no weight given for vertex {0}")]
    MissingVertexWeight(usize),
    #[error("search space of {size} weightings exceeds {limit}")]
    SearchSpaceTooLarge { size: String, limit: u64 },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::VertexOutOfRange { .. } => "VertexOutOfRange",
            Error::SelfLoop(_) => "SelfLoop",
            Error::DuplicateEdge(..) => "DuplicateEdge",
            Error::DisconnectedGraph => "DisconnectedGraph",
            Error::BoundTooSmall { .. } => "BoundTooSmall",
            Error::NotAForest => "NotAForest",
            Error::NotPrime(_) => "NotPrime",
            Error::FieldMismatch { .. } => "FieldMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::OddDimension(_) => "OddDimension",
            Error::InvalidGram(_) => "InvalidGram",
            Error::NotOnVariety => "NotOnVariety",
            Error::RetriesExhausted { .. } => "RetriesExhausted",
            Error::PreconditionViolated(_) => "PreconditionViolated",
            Error::UnsupportedCombination(_) => "UnsupportedCombination",
            Error::WorkCapExceeded { .. } => "WorkCapExceeded",
            Error::InternalConflict(_) => "InternalConflict",
            Error::MissingVertexWeight(_) => "MissingVertexWeight",
            Error::SearchSpaceTooLarge { .. } => "SearchSpaceTooLarge",
            Error::Parse(_) => "Parse",
        }
    }
}
