//! Decomposition transformations: minor-hosted to spanning-tree-hosted, and
//! gadget-graph decompositions to anchored decompositions of the base graph.

mod minor;
mod reduce;

pub use minor::{
    complete_model, minor_to_spanning, validate_model, MinorModel, MinorModelJson, ModelReport, ModelViolation,
};
pub use reduce::{reduce_to_anchored, Reduction};

use crate::decomposition::{DecompositionError, ValidationReport};
use crate::graph::GraphError;

#[derive(Debug, thiserror::Error)]
pub enum TransformError {
    #[error("invalid minor model: {0}")]
    InvalidModel(ModelReport),
    #[error("host graph is disconnected")]
    HostDisconnected,
    #[error("{0}")]
    PatternMismatch(String),
    #[error("input decomposition is invalid: {0}")]
    InvalidDecomposition(ValidationReport),
    #[error("decomposition host is not a spanning tree of the instance graph")]
    HostNotSpanning,
    #[error("reduced decomposition is invalid: {}", .0.report)]
    ReductionInvalid(Box<Reduction>),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
