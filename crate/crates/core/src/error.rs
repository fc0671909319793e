use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge {edge} is a self-loop on vertex {vertex}")]
    SelfLoop { edge: usize, vertex: usize },

    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: usize, vertex: usize },

    #[error("vertex {0} has a non-finite coordinate")]
    NonFinitePoint(usize),

    #[error("invalid radius: {0}")]
    InvalidRadius(String),

    #[error("no edge with positive length; cannot derive radii")]
    NoPositiveEdge,

    #[error("candidate set does not match the graph: {0}")]
    CandidateMismatch(String),

    #[error("placement does not match the graph: {0}")]
    PlacementMismatch(String),

    #[error("unknown conflict-graph node {0}")]
    UnknownNode(usize),

    #[error("search space of {size} placements exceeds the cap of {cap}")]
    OracleCapExceeded { size: u128, cap: u128 },

    #[error("invalid gadget parameter: {0}")]
    Gadget(String),

    #[error("cannot generate layout: {0}")]
    Generate(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
