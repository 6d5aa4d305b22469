use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node id {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("edge list parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {0} is isolated; the α-threshold rule and the normalized adjacency matrix need d(v) ≥ 1")]
    IsolatedNode(usize),

    #[error("no limit cycle detected within {0} rounds")]
    MaxRoundsExceeded(usize),

    #[error("random regular generation failed after {0} attempts")]
    GenerationFailed(usize),

    #[error("bound undefined: {0}")]
    BoundUndefined(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance too large for exact solver: {n} nodes exceeds cap {cap}")]
    TooLarge { n: usize, cap: usize },

    /// A guarantee that should hold by construction was observed to fail.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True when the error signals a falsified guarantee or an implementation bug
    /// rather than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_) | Error::MaxRoundsExceeded(_))
    }
}
