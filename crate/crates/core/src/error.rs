use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop edge ({v}, {v}) rejected")]
    LoopEdge { v: usize },
    #[error("malformed graph6 at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("budget exceeded: needs {required}, allowed {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("assignment is not {k}-uniform at vertex {vertex}")]
    NotKUniform { k: usize, vertex: usize },
    #[error("empty vertex set")]
    EmptyVertexSet,
    #[error("oracle disagreement: {0}")]
    OracleMismatch(String),
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
