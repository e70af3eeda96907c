use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::graph::{Graph, VertexId};

/// Root vertices of a reflected-tree: one for `G_1`, the pair `(u, v)` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Roots {
    Single(VertexId),
    Pair(VertexId, VertexId),
}

impl Roots {
    /// The `u`-side root (the only root of `G_1`).
    pub fn first(&self) -> &VertexId {
        match self {
            Roots::Single(r) | Roots::Pair(r, _) => r,
        }
    }

    /// The `v`-side root (again the only root of `G_1`).
    pub fn second(&self) -> &VertexId {
        match self {
            Roots::Single(r) | Roots::Pair(_, r) => r,
        }
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        match self {
            Roots::Single(r) => vec![r.clone()],
            Roots::Pair(u, v) => vec![u.clone(), v.clone()],
        }
    }
}

/// The `r`-th reflected-tree `G_r` together with its recursion metadata.
///
/// Identifiers encode the recursion path: copies of `G_{r-1}` are prefixed with
/// `L.` and `R.`, the new roots are `u` and `v`, and the single vertex of `G_1`
/// is `o`. Every copy stores its own graph using the identifiers of the
/// enclosing graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectedTree {
    level: u32,
    prefix: String,
    graph: Graph,
    roots: Roots,
    copies: Option<Box<[ReflectedTree; 2]>>,
}

pub fn reflected_tree(r: i64) -> Result<ReflectedTree, ConstructionError> {
    if r < 1 {
        return Err(ConstructionError::InvalidLevel(r));
    }
    if r > 24 {
        return Err(ConstructionError::InvalidParameter(format!("level {r} is too large to build")));
    }
    Ok(build(r as u32, String::new()))
}

fn build(r: u32, prefix: String) -> ReflectedTree {
    if r == 1 {
        let root = VertexId::new(format!("{prefix}o"));
        let graph = Graph::new([root.clone()], Vec::<(VertexId, VertexId)>::new()).expect("singleton");
        return ReflectedTree { level: 1, prefix, graph, roots: Roots::Single(root), copies: None };
    }
    let left = build(r - 1, format!("{prefix}L."));
    let right = build(r - 1, format!("{prefix}R."));
    let u = VertexId::new(format!("{prefix}u"));
    let v = VertexId::new(format!("{prefix}v"));

    let mut vertices: Vec<VertexId> = vec![u.clone(), v.clone()];
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    for copy in [&left, &right] {
        let g = &copy.graph;
        vertices.extend(g.ids().iter().cloned());
        edges.extend(g.edges().iter().map(|&(a, b)| (g.id(a).clone(), g.id(b).clone())));
        edges.push((u.clone(), copy.roots.first().clone()));
        edges.push((v.clone(), copy.roots.second().clone()));
    }
    let graph = Graph::new(vertices, edges).expect("reflected-tree is a simple graph");
    ReflectedTree {
        level: r,
        prefix,
        graph,
        roots: Roots::Pair(u, v),
        copies: Some(Box::new([left, right])),
    }
}

impl ReflectedTree {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn roots(&self) -> &Roots {
        &self.roots
    }

    /// Identifier prefix shared by every vertex of this copy.
    pub fn prefix(&self) -> &str {
        &self.prefix
    }

    /// The two copies `H`, `H'` of `G_{r-1}` (absent for `r = 1`).
    pub fn copies(&self) -> Option<&[ReflectedTree; 2]> {
        self.copies.as_deref()
    }

    /// Which copy a vertex lies in, decided from its identifier alone.
    /// `None` for the roots and for foreign identifiers.
    pub fn copy_of(&self, id: &str) -> Option<usize> {
        let rest = id.strip_prefix(self.prefix.as_str())?;
        if self.level < 2 {
            None
        } else if rest.starts_with("L.") {
            Some(0)
        } else if rest.starts_with("R.") {
            Some(1)
        } else {
            None
        }
    }

    pub fn expected_vertex_count(r: u32) -> u64 {
        3 * (1u64 << (r - 1)) - 2
    }

    pub fn expected_edge_count(r: u32) -> u64 {
        4 * ((1u64 << (r - 1)) - 1)
    }

    /// Metadata written next to the graph JSON.
    pub fn metadata(&self) -> ReflectedTreeMeta {
        ReflectedTreeMeta {
            level: self.level,
            roots: self.roots.to_vec(),
            copies: self
                .copies()
                .map(|cs| {
                    cs.iter()
                        .map(|c| CopyMeta {
                            prefix: c.prefix.clone(),
                            roots: c.roots.to_vec(),
                            vertices: c.graph.ids().to_vec(),
                        })
                        .collect()
                })
                .unwrap_or_default(),
        }
    }

    /// The graph with its roots labelled `u` / `v` (or `root` for `G_1`).
    pub fn labelled_graph(&self) -> Graph {
        let labels = match &self.roots {
            Roots::Single(r) => vec![(r.clone(), "root".to_string())],
            Roots::Pair(u, v) => vec![(u.clone(), "u".to_string()), (v.clone(), "v".to_string())],
        };
        self.graph.clone().with_labels(labels).expect("roots are vertices")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectedTreeMeta {
    pub level: u32,
    pub roots: Vec<VertexId>,
    pub copies: Vec<CopyMeta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CopyMeta {
    pub prefix: String,
    pub roots: Vec<VertexId>,
    pub vertices: Vec<VertexId>,
}
