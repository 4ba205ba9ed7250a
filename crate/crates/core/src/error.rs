use crate::hypergraph::Triple;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a system on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("degenerate triple ({0}, {1}, {2}): repeated vertex")]
    DegenerateTriple(usize, usize, usize),
    #[error("{n} vertices exceeds the limit of {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("edge {0} is already present")]
    DuplicateEdge(Triple),
    #[error("edge {0} is not present")]
    MissingEdge(Triple),
    #[error("pair ({0}, {1}) is not a pair of distinct vertices")]
    InvalidPair(usize, usize),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown pattern `{0}`")]
    UnknownPattern(String),
    #[error("pattern has {f} vertices; automorphism counting supports at most {limit}")]
    PatternTooLarge { f: usize, limit: usize },
    #[error("counter overflow")]
    Overflow,
    #[error("{embeddings} embeddings not divisible by automorphism count {aut}")]
    InexactDivision { embeddings: u128, aut: u64 },
    #[error("requested {requested} edges but capacity is {capacity}")]
    CapacityExceeded { requested: usize, capacity: usize },
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("malformed construction spec `{spec}`: {message}")]
    Spec { spec: String, message: String },
}
