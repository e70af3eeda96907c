//! Exact small-scale engines: spanning trees, the anchored decider, treewidth and
//! the long-path harness.

mod decider;
mod longpath;
mod spanning;
mod treewidth;

pub use decider::{min_width_on_tree, DeciderResult, DeciderStats, Status, MAX_HOST_NODES};
pub use longpath::{check_longpath_property, longpath_height, longpath_threshold};
pub use spanning::{
    count_spanning_trees, count_spanning_trees_with, enumerate_spanning_trees, SpanningTreeSampler, SpanningTrees,
};
pub use treewidth::{
    exact_treewidth, treewidth_at_most_two, treewidth_dp, treewidth_lower_bound, Treewidth, TreewidthMethod, DEFAULT_TREEWIDTH_CAP,
};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomposition::{DecompositionError, TreeDecomposition, ValidationReport};
use crate::graph::{is_connected, Graph, GraphError};

/// Above this many spanning trees, quantified checks switch to sampling.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;
pub const DEFAULT_SAMPLE_SIZE: usize = 10_000;
/// Vertex cap for [`min_anchored_spanning_width`].
pub const DEFAULT_MIN_ANCHORED_CAP: usize = 12;

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("host is not a spanning tree of the graph")]
    HostNotSpanning,
    #[error("host has {nodes} nodes; the decider supports at most {max}")]
    HostTooLarge { nodes: usize, max: usize },
    #[error("{vertices} vertices exceed the cap {cap}")]
    CapExceeded { vertices: usize, cap: usize },
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(ValidationReport),
    #[error("decomposition width {width} exceeds k = {k}")]
    WidthExceeded { width: i64, k: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

/// How a quantifier over all spanning trees was discharged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Coverage {
    Exhaustive {
        #[serde(with = "decimal")]
        count: BigInt,
    },
    Sampled {
        n: usize,
        seed: u64,
        #[serde(with = "decimal")]
        total: BigInt,
    },
}

/// Big integers as decimal strings on the wire.
pub mod decimal {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Coverage {
    pub fn tree_count(&self) -> usize {
        match self {
            Coverage::Exhaustive { count } => usize::try_from(count).expect("enumerated counts fit"),
            Coverage::Sampled { n, .. } => *n,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Coverage::Exhaustive { count } => format!("exhaustive, N={count}"),
            Coverage::Sampled { n, seed, .. } => format!("sampled, N={n}, seed={seed}"),
        }
    }
}

/// Exhaustive when the matrix-tree count is at most `enumeration_cap`, otherwise a
/// seeded uniform sample of `sample` trees.
pub fn plan_spanning_trees(g: &Graph, enumeration_cap: u64, sample: usize, seed: u64) -> Result<Coverage, SearchError> {
    let count = count_spanning_trees(g)?;
    Ok(if count <= BigInt::from(enumeration_cap) {
        Coverage::Exhaustive { count }
    } else {
        Coverage::Sampled { n: sample, seed, total: count }
    })
}

const CHUNK: usize = 4096;

/// Applies `f` to every tree of the plan in parallel, returning results in stream order.
pub fn map_spanning_trees<R, F>(g: &Graph, coverage: &Coverage, f: F) -> Result<Vec<R>, SearchError>
where
    R: Send,
    F: Fn(&Graph) -> R + Sync,
{
    let mut stream: Box<dyn Iterator<Item = Graph>> = match coverage {
        Coverage::Exhaustive { .. } => Box::new(enumerate_spanning_trees(g)?),
        Coverage::Sampled { n, seed, .. } => Box::new(SpanningTreeSampler::new(g, *seed)?.take(*n)),
    };
    let mut out = Vec::new();
    loop {
        let chunk: Vec<Graph> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            break;
        }
        out.par_extend(chunk.par_iter().map(&f));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinAnchored {
    pub width: usize,
    pub host: Graph,
    pub witness: TreeDecomposition,
    pub trees: usize,
}

/// Minimum anchored width over all spanning trees of a small connected graph.
/// The witness host is the first spanning tree (in enumeration order) attaining it.
pub fn min_anchored_spanning_width(g: &Graph, cap: usize) -> Result<MinAnchored, SearchError> {
    if !is_connected(g) {
        return Err(SearchError::Disconnected);
    }
    if g.vertex_count() > cap {
        return Err(SearchError::CapExceeded { vertices: g.vertex_count(), cap });
    }
    let trees: Vec<Graph> = enumerate_spanning_trees(g)?.collect();
    let lower = usize::from(g.edge_count() > 0);
    for budget in lower..g.vertex_count().max(1) {
        let hit = trees.par_iter().find_map_first(|t| {
            let r = min_width_on_tree(g, t, budget, true).expect("enumerated trees span g");
            r.witness.map(|w| (t.clone(), w))
        });
        if let Some((host, witness)) = hit {
            return Ok(MinAnchored { width: budget, host, witness, trees: trees.len() });
        }
    }
    unreachable!("all bags equal to V(G) is an anchored decomposition of width |V|-1")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_anchored_small_cases() {
        let single = Graph::path(1).unwrap();
        assert_eq!(min_anchored_spanning_width(&single, 10).unwrap().width, 0);
        let p = Graph::path(5).unwrap();
        assert_eq!(min_anchored_spanning_width(&p, 10).unwrap().width, 1);
        let c4 = Graph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let r = min_anchored_spanning_width(&c4, 10).unwrap();
        assert_eq!((r.width, r.trees), (2, 4));
        assert!(matches!(min_anchored_spanning_width(&c4, 3), Err(SearchError::CapExceeded { .. })));
    }

    #[test]
    fn plan_switches_to_sampling() {
        let c4 = Graph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let all = plan_spanning_trees(&c4, 4, 10, 1).unwrap();
        assert_eq!(all.label(), "exhaustive, N=4");
        assert_eq!(map_spanning_trees(&c4, &all, |t| t.edge_count()).unwrap(), vec![3; 4]);
        let some = plan_spanning_trees(&c4, 3, 10, 1).unwrap();
        assert_eq!(some.label(), "sampled, N=10, seed=1");
        assert_eq!(map_spanning_trees(&c4, &some, |_| ()).unwrap().len(), 10);
    }
}
