//! Tree decompositions hosted on spanning trees.
//!
//! Builds reflected-trees and gadget graphs, transforms decompositions hosted
//! on minors into ones hosted on spanning trees (and those into anchored ones),
//! produces width lower-bound certificates, and checks all of it with exact
//! search at small scale.

pub mod certificates;
pub mod constructions;
pub mod decomposition;
pub mod generate;
pub mod graph;
pub mod search;
pub mod transforms;

pub use graph::{Graph, VertexId};
