use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    /// An enumeration produced more items than its cap allows.
    #[error("{what}: enumeration exceeded cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    /// The instance is larger than an exact routine is willing to handle.
    #[error("{stage}: graph order {n} exceeds size guard {limit}")]
    SizeGuard { stage: &'static str, n: usize, limit: usize },

    #[error("matching is not maximum: an augmenting path exists")]
    NotMaximum,

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("Hall condition fails: {0}")]
    HallViolated(String),

    #[error("set is not a critical independent set")]
    NotCriticalIndependent,

    #[error("not an odd cycle of the graph: {0}")]
    NotOddCycle(String),

    #[error("graph is not R-disjoint: {0}")]
    NotRDisjoint(String),

    #[error("invalid BAB structure: {0}")]
    InvalidStructure(String),

    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),

    #[error("{0}")]
    Io(String),

    /// Independent computation routes returned different answers.
    #[error("cross-check failed: {0}")]
    RoutesDisagree(String),
}

impl Error {
    /// True for refusals caused by instance size rather than bad input.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::SizeGuard { .. })
    }

    /// Process exit code used by the CLI: 1 for bad input, 2 for size
    /// guards and infeasible requests, 3 for failed cross-checks.
    pub fn exit_code(&self) -> i32 {
        match self {
            e if e.is_guard() => 2,
            Error::InfeasibleParams(_) => 2,
            Error::RoutesDisagree(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
