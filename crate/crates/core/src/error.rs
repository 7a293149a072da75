use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate vertex {0} in vertex set")]
    DuplicateVertex(usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("vertex set is not independent")]
    NotIndependent,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("size guard exceeded: {what} has size {size}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("no independent set of size {0}")]
    NoIndependentSet(usize),
    #[error("rejection sampler gave up after {0} attempts")]
    RejectionCapExceeded(u64),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
