use thiserror::Error;

use crate::netcore::NodeId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on node {0}: the influence relation must be irreflexive")]
    SelfLoop(NodeId),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),

    #[error("node {node} out of range for a network of {n} agents")]
    NodeOutOfRange { node: NodeId, n: usize },

    #[error("invalid annotations: {0}")]
    Annotation(String),

    #[error("labelling has length {got}, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("invalid labelling string: {0}")]
    LabellingParse(String),

    #[error("network contains a cycle")]
    Cyclic,

    #[error("network has {n} agents; exhaustive search is capped at {cap}")]
    ExhaustiveCap { n: usize, cap: usize },

    #[error("visited-state memory cap of {cap} states exceeded")]
    MemoryCap { cap: usize },

    #[error("base pair already added")]
    DuplicateBasePair,

    #[error("base pair does not belong to this builder")]
    MissingBasePair,

    #[error("dual pair ({0}, {1}) is not registered with this builder")]
    DanglingPair(NodeId, NodeId),

    #[error("fuse line needs at least one monitored dual pair")]
    EmptyFuseLine,

    #[error("alarm size parameter k must be at least 2, got {0}")]
    AlarmTooSmall(usize),

    #[error("invalid circuit: {0}")]
    Circuit(String),

    #[error("compiled output pair {index} is invalid")]
    InvalidOutput { index: usize },

    #[error("invalid Turing machine: {0}")]
    Machine(String),

    #[error("malformed configuration: {0}")]
    Config(String),

    #[error("labelling violates initial condition {0}")]
    InitialCondition(String),

    #[error("parse error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
