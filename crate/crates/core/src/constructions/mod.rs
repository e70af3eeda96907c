//! The two graph families: reflected-trees `G_r` and gadget graphs `G̃`.

mod gadget;
pub mod quantity;
mod reflected;
mod schedule;

use thiserror::Error;

use crate::graph::{GraphError, VertexId};

pub use gadget::{
    attach_gadgets, complete_ary_tree, complete_ary_tree_rooted, gadget_to_dot, Attachment,
    GadgetInstance, DEFAULT_MATERIALIZATION_CAP,
};
pub use quantity::{Magnitude, Quantity};
pub use reflected::{reflected_tree, CopyMeta, ReflectedTree, ReflectedTreeMeta, Roots};
pub use schedule::{gadget_schedule, toy_schedule, GadgetSchedule, ScheduleEntry};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("reflected-tree level must be at least 1, got {0}")]
    InvalidLevel(i64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("construction needs {total} vertices, above the cap of {cap}")]
    SizeExceeded { total: Quantity, cap: u64 },
    #[error("ordering mismatch: {0}")]
    OrderingMismatch(String),
    #[error("generated identifier `{0}` collides with an existing vertex")]
    IdCollision(VertexId),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
