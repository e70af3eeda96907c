//! Tree decompositions in the subtree view: a host tree `T` with bags `B_x`,
//! and for each decomposed vertex `v` the occupied host set `T_v = {x : v ∈ B_x}`.

mod classify;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{is_connected_subset, is_spanning_tree, is_tree, Graph, GraphError, VertexId};

pub use classify::{classify_vertices, Classification, Freedom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecompositionError {
    #[error("host graph is not a tree")]
    HostNotTree,
    #[error("host tree is not a spanning tree of the decomposed graph")]
    HostNotSpanning,
    #[error("bag given for unknown host node `{0}`")]
    UnknownHostNode(VertexId),
    #[error("bag vertex `{0}` is not a vertex of the decomposed graph")]
    ForeignVertex(VertexId),
    #[error("assigned subtree of `{0}` is empty")]
    EmptySubtree(VertexId),
    #[error("assigned subtree of `{0}` is not connected in the host")]
    DisconnectedSubtree(VertexId),
    #[error("decomposition is invalid: {0}")]
    Invalid(ValidationReport),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A single failed condition of the decomposition definition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    EmptySubtree { vertex: VertexId },
    DisconnectedSubtree { vertex: VertexId },
    UncoveredEdge { edge: [VertexId; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { valid: violations.is_empty(), violations }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.valid {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| match v {
                Violation::EmptySubtree { vertex } => format!("empty subtree for {vertex}"),
                Violation::DisconnectedSubtree { vertex } => format!("disconnected subtree for {vertex}"),
                Violation::UncoveredEdge { edge: [a, b] } => format!("uncovered edge {{{a}, {b}}}"),
            })
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Host tree plus one (possibly empty) bag per host node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    host: Graph,
    bags: Vec<BTreeSet<VertexId>>,
}

impl TreeDecomposition {
    /// Host nodes missing from `bags` get an empty bag.
    pub fn new(
        host: Graph,
        bags: BTreeMap<VertexId, BTreeSet<VertexId>>,
    ) -> Result<Self, DecompositionError> {
        let mut indexed = vec![BTreeSet::new(); host.vertex_count()];
        for (x, bag) in bags {
            let i = host.index_of(x.as_str()).ok_or(DecompositionError::UnknownHostNode(x))?;
            indexed[i] = bag;
        }
        Ok(TreeDecomposition { host, bags: indexed })
    }

    /// Bags indexed by host vertex index.
    pub fn from_indexed(host: Graph, bags: Vec<BTreeSet<VertexId>>) -> Self {
        assert_eq!(host.vertex_count(), bags.len(), "one bag per host node");
        TreeDecomposition { host, bags }
    }

    /// Builds bags `B_x = {v : x ∈ T_v}` from per-vertex host subtrees.
    pub fn from_subtrees(
        host: Graph,
        assignment: &BTreeMap<VertexId, BTreeSet<VertexId>>,
    ) -> Result<Self, DecompositionError> {
        if !is_tree(&host) {
            return Err(DecompositionError::HostNotTree);
        }
        let mut bags = vec![BTreeSet::new(); host.vertex_count()];
        for (v, nodes) in assignment {
            let set = host.indices_of(nodes)?;
            if set.is_empty() {
                return Err(DecompositionError::EmptySubtree(v.clone()));
            }
            if !is_connected_subset(&host, &set) {
                return Err(DecompositionError::DisconnectedSubtree(v.clone()));
            }
            for x in set {
                bags[x].insert(v.clone());
            }
        }
        Ok(TreeDecomposition { host, bags })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn bag(&self, x: usize) -> &BTreeSet<VertexId> {
        &self.bags[x]
    }

    pub fn bag_of(&self, x: &str) -> Option<&BTreeSet<VertexId>> {
        self.host.index_of(x).map(|i| &self.bags[i])
    }

    pub fn bags(&self) -> impl Iterator<Item = (&VertexId, &BTreeSet<VertexId>)> {
        self.host.ids().iter().zip(&self.bags)
    }

    pub fn indexed_bags(&self) -> &[BTreeSet<VertexId>] {
        &self.bags
    }

    /// Maximum bag size minus one; `-1` when every bag is empty.
    pub fn width(&self) -> i64 {
        self.bags.iter().map(|b| b.len() as i64).max().unwrap_or(0) - 1
    }

    /// `T_v` as host indices.
    pub fn subtree_indices(&self, v: &VertexId) -> BTreeSet<usize> {
        (0..self.bags.len()).filter(|&x| self.bags[x].contains(v)).collect()
    }

    /// `T_v` as host identifiers.
    pub fn subtree_of(&self, v: &VertexId) -> BTreeSet<VertexId> {
        self.subtree_indices(v).into_iter().map(|x| self.host.id(x).clone()).collect()
    }

    /// Every vertex that occurs in some bag.
    pub fn decomposed_vertices(&self) -> BTreeSet<VertexId> {
        self.bags.iter().flatten().cloned().collect()
    }

    /// `T_v` for every vertex occurring in some bag, as host indices.
    pub fn all_subtrees(&self) -> HashMap<VertexId, BTreeSet<usize>> {
        let mut map: HashMap<VertexId, BTreeSet<usize>> = HashMap::new();
        for (x, bag) in self.bags.iter().enumerate() {
            for v in bag {
                map.entry(v.clone()).or_default().insert(x);
            }
        }
        map
    }

    /// The assignment `v ↦ T_v` over the given vertices (host identifiers).
    pub fn assignment<'a>(
        &self,
        vertices: impl IntoIterator<Item = &'a VertexId>,
    ) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        let all = self.all_subtrees();
        vertices
            .into_iter()
            .map(|v| {
                let nodes = all
                    .get(v)
                    .map(|s| s.iter().map(|&x| self.host.id(x).clone()).collect())
                    .unwrap_or_default();
                (v.clone(), nodes)
            })
            .collect()
    }

    /// Host tree rendered with bag labels.
    pub fn to_dot(&self, name: &str) -> String {
        use crate::graph::dot_quote as quote;
        let mut out = String::new();
        writeln!(out, "graph {} {{", quote(name)).unwrap();
        for (x, bag) in self.bags() {
            let items: Vec<&str> = bag.iter().map(VertexId::as_str).collect();
            let label = format!("{x}: {{{}}}", items.join(", "));
            writeln!(out, "  {} [shape=box, label={}];", quote(x.as_str()), quote(&label)).unwrap();
        }
        for &(a, b) in self.host.edges() {
            writeln!(out, "  {} -- {};", quote(self.host.id(a).as_str()), quote(self.host.id(b).as_str()))
                .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Checks both conditions of the subtree definition and reports every violation.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Result<ValidationReport, DecompositionError> {
    if !is_tree(&td.host) {
        return Err(DecompositionError::HostNotTree);
    }
    let subtrees = td.all_subtrees();
    if let Some(v) = subtrees.keys().filter(|v| !g.contains(v.as_str())).min() {
        return Err(DecompositionError::ForeignVertex(v.clone()));
    }
    let empty = BTreeSet::new();
    let mut violations = Vec::new();
    for v in g.ids() {
        let t_v = subtrees.get(v).unwrap_or(&empty);
        if t_v.is_empty() {
            violations.push(Violation::EmptySubtree { vertex: v.clone() });
        } else if !is_connected_subset(&td.host, t_v) {
            violations.push(Violation::DisconnectedSubtree { vertex: v.clone() });
        }
    }
    for &(a, b) in g.edges() {
        let (ia, ib) = g.edge_ids((a, b));
        let ta = subtrees.get(ia).unwrap_or(&empty);
        let tb = subtrees.get(ib).unwrap_or(&empty);
        if ta.is_disjoint(tb) {
            violations.push(Violation::UncoveredEdge { edge: [ia.clone(), ib.clone()] });
        }
    }
    Ok(ValidationReport::from_violations(violations))
}

/// Every vertex `v` of `g` lies in its own subtree `T_v`. The host must be a spanning tree of `g`.
pub fn is_anchored(g: &Graph, td: &TreeDecomposition) -> Result<bool, DecompositionError> {
    if !is_spanning_tree(g, &td.host) {
        return Err(DecompositionError::HostNotSpanning);
    }
    Ok(g.ids().iter().enumerate().all(|(x, v)| td.bags[x].contains(v)))
}

/// Wire form: `{"host_vertices": [...], "host_edges": [...], "bags": {"x": [...]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub host_vertices: Vec<VertexId>,
    pub host_edges: Vec<[VertexId; 2]>,
    pub bags: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl From<&TreeDecomposition> for DecompositionJson {
    fn from(td: &TreeDecomposition) -> Self {
        let h = &td.host;
        DecompositionJson {
            host_vertices: h.ids().to_vec(),
            host_edges: h.edges().iter().map(|&(a, b)| [h.id(a).clone(), h.id(b).clone()]).collect(),
            bags: td.bags().map(|(x, b)| (x.clone(), b.clone())).collect(),
        }
    }
}

impl TryFrom<DecompositionJson> for TreeDecomposition {
    type Error = DecompositionError;

    fn try_from(j: DecompositionJson) -> Result<Self, DecompositionError> {
        let host = Graph::new(j.host_vertices, j.host_edges.into_iter().map(|[a, b]| (a, b)))?;
        TreeDecomposition::new(host, j.bags)
    }
}

impl Serialize for TreeDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        DecompositionJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for TreeDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = DecompositionJson::deserialize(d)?;
        TreeDecomposition::try_from(j).map_err(serde::de::Error::custom)
    }
}
