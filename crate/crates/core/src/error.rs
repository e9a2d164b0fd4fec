use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {edge}: endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange {
        edge: usize,
        endpoint: usize,
        vertex_count: usize,
    },
    #[error("edge {edge}: self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },
    #[error("edge {edge}: weight {weight} is not a finite positive number")]
    InvalidWeight { edge: usize, weight: f64 },
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("invalid vertex partition: {0}")]
    InvalidPartition(String),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("source and sink are the same vertex {0}")]
    SameVertex(usize),
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("edge {edge} out of range for {edge_count} edges")]
    EdgeOutOfRange { edge: usize, edge_count: usize },
    #[error("at least 2 vertices required, got {0}")]
    TooFewVertices(usize),
    #[error("{vertex_count} vertices exceeds the exhaustive limit of {max}")]
    TooManyVertices { vertex_count: usize, max: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("iteration cap of {0} exceeded")]
    IterationCapExceeded(usize),
    #[error("level {level} out of range 0..={terminal}")]
    LevelOutOfRange { level: usize, terminal: usize },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
