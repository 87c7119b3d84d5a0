use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid vertex {vertex} (graph has {n} vertices)")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("invalid neighbor index {index} for vertex {vertex} of degree {degree}")]
    InvalidIndex { vertex: usize, index: usize, degree: usize },
    #[error("({0}, {1}) is not an edge of the graph")]
    InvalidEdge(usize, usize),
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("component of size {0} is too small (need at least 2 vertices)")]
    DegenerateComponent(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph with {n} vertices exceeds the limit of {limit} for exhaustive enumeration")]
    TooLarge { n: usize, limit: usize },
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}
