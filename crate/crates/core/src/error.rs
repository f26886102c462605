use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graphs must have between 1 and {max} vertices, got {got}")]
    VertexCount { got: usize, max: usize },

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("vertex set must be nonempty")]
    EmptyVertexSet,

    #[error("graph has no edges")]
    Edgeless,

    #[error("invalid graph6 string: {0}")]
    Graph6(String),

    #[error("invalid edge-list JSON: {0}")]
    EdgeList(String),

    #[error("invalid rooted tree: {0}")]
    InvalidTree(String),

    #[error("invalid spider: {0}")]
    InvalidSpider(String),

    #[error("{non_roots} non-root vertices exceed the enumeration cap of {cap}")]
    EnumerationCap { non_roots: usize, cap: usize },

    #[error("invalid family spec `{spec}`: {reason}")]
    FamilySpec { spec: String, reason: String },

    #[error("invalid rational `{0}`")]
    ParseRational(String),

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("exponent {0} is not in the open interval (1, 2)")]
    ExponentRange(String),

    #[error("certificate replay failed at step {step}: {reason}")]
    Replay { step: usize, reason: String },

    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("pattern graph must be connected with at least 2 vertices")]
    BadPattern,

    #[error("invalid bipartite graph: {0}")]
    Bipartite(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid threshold table: {0}")]
    Threshold(String),

    #[error("path classification lacks length {0}")]
    MissingCoverage(usize),

    #[error("extraction bound violated: {0}")]
    BoundViolated(String),

    #[error("i/o error: {0}")]
    Io(String),
}
