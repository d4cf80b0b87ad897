use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("graph is not bipartite (odd cycle through vertex {0})")]
    NotBipartite(usize),
    #[error("graph has no bipartition")]
    MissingBipartition,
    #[error("graph is not regular")]
    NotRegular,
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("retry budget of {0} attempts exhausted")]
    RetryBudgetExhausted(usize),
    #[error("search budget exceeded ({0})")]
    BudgetExceeded(String),
    #[error("power iteration did not converge within {0} iterations")]
    NonConvergence(usize),
    #[error("no phase satisfies the excluded-count bound; lambda = {0} is not a valid expansion parameter")]
    InvalidLambda(f64),
    #[error("enumeration cap of {0} functions exceeded")]
    CapExceeded(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant broken: {0}")]
    Invariant(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("hypotheses not met: {0}")]
    HypothesesNotMet(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
