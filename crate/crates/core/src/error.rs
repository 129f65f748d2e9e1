use thiserror::Error;

use crate::ids::{FlagId, VertexId};
use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("unknown flag `{0}`")]
    UnknownFlag(FlagId),
    #[error("invalid graph: {0}")]
    InvalidGraph(ValidationReport),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(ValidationReport),
    #[error("invalid curve configuration: {0}")]
    InvalidConfig(ValidationReport),
    #[error("invalid gluing recipe: {0}")]
    InvalidRecipe(ValidationReport),
    #[error("endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("unstable: {0}")]
    Unstable(String),
    #[error("odd number of Ramond labels ({0})")]
    OddRamond(usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("label problem: {0}")]
    Label(String),
    #[error("color mismatch: {0}")]
    Color(String),
    #[error("({0}, {1}) is not an edge")]
    NotAnEdge(FlagId, FlagId),
    #[error("edges share a flag: {0}")]
    OverlappingEdges(String),
    #[error("odd dimension {0} is not an integer")]
    HalfIntegerDimension(String),
    #[error("search limit exceeded: needs up to {needed} edges, limit is {limit}")]
    LimitExceeded { needed: usize, limit: usize },
    #[error("count does not fit in 64 bits")]
    Overflow,
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("cannot read {0}")]
    Io(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
