//! Simple undirected graphs with stable, ordered vertex identifiers.
//!
//! Vertices are stored sorted by identifier, so two graphs on the same vertex
//! set always agree on vertex indices. Spanning subgraphs share the vertex
//! table of their parent graph.

mod dot;
mod json;
mod tree;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dot::to_dot;
pub(crate) use dot::quote as dot_quote;
pub use json::GraphJson;
pub use tree::{
    enumerate_induced_subtrees, fundamental_cycle, tree_diameter, tree_path, FundamentalCycle,
    InducedSubtrees, RootedTree,
};

/// Opaque vertex identifier. Ordering is lexicographic on the underlying string.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(id: impl Into<String>) -> Self {
        VertexId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_owned())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

impl From<&String> for VertexId {
    fn from(s: &String) -> Self {
        VertexId(s.clone())
    }
}

impl From<&VertexId> for VertexId {
    fn from(v: &VertexId) -> Self {
        v.clone()
    }
}

impl Borrow<str> for VertexId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// An edge as a pair of vertex indices with `0 < 1`.
pub type Edge = (usize, usize);

#[inline]
pub fn edge(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has no vertices")]
    Empty,
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(VertexId),
    #[error("loop at `{0}`")]
    Loop(VertexId),
    #[error("parallel edge {{{0}, {1}}}")]
    ParallelEdge(VertexId, VertexId),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(VertexId),
    #[error("{{{0}, {1}}} is not an edge")]
    NotAnEdge(VertexId, VertexId),
    #[error("{{{0}, {1}}} is an edge of the tree")]
    TreeEdge(VertexId, VertexId),
    #[error("graph is not a tree")]
    NotTree,
    #[error("graph is not a spanning tree of the host graph")]
    NotSpanningTree,
}

#[derive(Debug, PartialEq, Eq)]
struct VertexTable {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
}

impl VertexTable {
    fn new(mut ids: Vec<VertexId>) -> Result<Self, GraphError> {
        if ids.is_empty() {
            return Err(GraphError::Empty);
        }
        ids.sort();
        if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
        let index = ids.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(VertexTable { ids, index })
    }
}

/// Immutable simple undirected graph.
#[derive(Clone)]
pub struct Graph {
    table: Arc<VertexTable>,
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    labels: BTreeMap<usize, String>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.table.ids == other.table.ids && self.edges == other.edges && self.labels == other.labels
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self.edges.iter().map(|&(a, b)| (self.id(a), self.id(b))).collect();
        f.debug_struct("Graph")
            .field("vertices", &self.table.ids)
            .field("edges", &edges)
            .finish()
    }
}

impl Graph {
    /// Builds a graph from identifiers and identifier pairs.
    pub fn new<V, A, B>(
        vertices: impl IntoIterator<Item = V>,
        edges: impl IntoIterator<Item = (A, B)>,
    ) -> Result<Self, GraphError>
    where
        V: Into<VertexId>,
        A: Into<VertexId>,
        B: Into<VertexId>,
    {
        let table = Arc::new(VertexTable::new(vertices.into_iter().map(Into::into).collect())?);
        let mut idx = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.into(), b.into());
            let ia = *table.index.get(&a).ok_or_else(|| GraphError::UnknownVertex(a.clone()))?;
            let ib = *table.index.get(&b).ok_or(GraphError::UnknownVertex(b))?;
            idx.push((ia, ib));
        }
        Self::from_table(table, idx)
    }

    fn from_table(table: Arc<VertexTable>, raw: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let n = table.ids.len();
        let mut edges = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a == b {
                return Err(GraphError::Loop(table.ids[a].clone()));
            }
            edges.push(edge(a, b));
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0] == w[1]) {
            let (a, b) = w[0];
            return Err(GraphError::ParallelEdge(table.ids[a].clone(), table.ids[b].clone()));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { table, adj, edges, labels: BTreeMap::new() })
    }

    /// Canonical path on `n` vertices `p0 – p1 – … – p{n-1}` (zero padded).
    pub fn path(n: usize) -> Result<Self, GraphError> {
        let width = n.saturating_sub(1).to_string().len();
        let ids: Vec<String> = (0..n).map(|i| format!("p{i:0width$}")).collect();
        let edges: Vec<_> = ids.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
        Graph::new(ids, edges)
    }

    /// Attaches labels; every key must be a vertex.
    pub fn with_labels<K: Into<VertexId>>(
        mut self,
        labels: impl IntoIterator<Item = (K, String)>,
    ) -> Result<Self, GraphError> {
        for (k, text) in labels {
            let k = k.into();
            let i = self.index_of(k.as_str()).ok_or(GraphError::UnknownVertex(k))?;
            self.labels.insert(i, text);
        }
        Ok(self)
    }

    /// Spanning subgraph on the same vertex set. Every edge must belong to `self`.
    pub fn spanning_subgraph(&self, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        for &(a, b) in &edges {
            if !self.has_edge(a, b) {
                return Err(GraphError::NotAnEdge(self.id(a).clone(), self.id(b).clone()));
            }
        }
        Self::from_table(Arc::clone(&self.table), edges)
    }

    /// Graph on the same vertex set with arbitrary edges (not necessarily a subgraph).
    pub fn with_same_vertices(&self, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        Self::from_table(Arc::clone(&self.table), edges.into_iter().collect())
    }

    /// Induced subgraph on the given vertex indices. Labels are kept.
    pub fn induced_subgraph(&self, vertices: &BTreeSet<usize>) -> Result<Self, GraphError> {
        let ids: Vec<VertexId> = vertices.iter().map(|&i| self.id(i).clone()).collect();
        let table = Arc::new(VertexTable::new(ids)?);
        let mut raw = Vec::new();
        for &(a, b) in &self.edges {
            if vertices.contains(&a) && vertices.contains(&b) {
                raw.push((table.index[self.id(a)], table.index[self.id(b)]));
            }
        }
        let mut g = Self::from_table(Arc::clone(&table), raw)?;
        for (&i, text) in &self.labels {
            if let Some(&j) = table.index.get(self.id(i)) {
                g.labels.insert(j, text.clone());
            }
        }
        Ok(g)
    }

    /// Induced subgraph on identifiers.
    pub fn induced_by_ids<'a>(
        &self,
        ids: impl IntoIterator<Item = &'a VertexId>,
    ) -> Result<Self, GraphError> {
        let set = self.indices_of(ids)?;
        self.induced_subgraph(&set)
    }

    pub fn indices_of<'a>(
        &self,
        ids: impl IntoIterator<Item = &'a VertexId>,
    ) -> Result<BTreeSet<usize>, GraphError> {
        ids.into_iter()
            .map(|v| self.index_of(v.as_str()).ok_or_else(|| GraphError::UnknownVertex(v.clone())))
            .collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.table.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn ids(&self) -> &[VertexId] {
        &self.table.ids
    }

    pub fn id(&self, i: usize) -> &VertexId {
        &self.table.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.table.index.get(id).copied()
    }

    pub fn require(&self, id: &VertexId) -> Result<usize, GraphError> {
        self.index_of(id.as_str()).ok_or_else(|| GraphError::UnknownVertex(id.clone()))
    }

    pub fn contains(&self, id: &str) -> bool {
        self.table.index.contains_key(id)
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.adj[a].binary_search(&b).is_ok()
    }

    /// Sorted edge list.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_ids(&self, e: Edge) -> (&VertexId, &VertexId) {
        (self.id(e.0), self.id(e.1))
    }

    /// Position of an edge in [`Graph::edges`].
    pub fn edge_position(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&edge(a, b)).ok()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(&i).map(String::as_str)
    }

    pub fn labels(&self) -> impl Iterator<Item = (&VertexId, &str)> {
        self.labels.iter().map(|(&i, s)| (self.id(i), s.as_str()))
    }

    /// True iff both graphs have the same vertex identifiers (and hence indices).
    pub fn same_vertices(&self, other: &Graph) -> bool {
        Arc::ptr_eq(&self.table, &other.table) || self.table.ids == other.table.ids
    }

    /// True iff every edge of `self` is an edge of `other` (same vertex set required).
    pub fn edges_subset_of(&self, other: &Graph) -> bool {
        self.same_vertices(other) && self.edges.iter().all(|&(a, b)| other.has_edge(a, b))
    }
}

/// Connected components as sorted index lists, ordered by smallest member.
pub fn components(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    g.vertex_count() > 0 && components(g).len() == 1
}

/// Connectivity of the subgraph induced by `subset` (empty subset: false).
pub fn is_connected_subset(g: &Graph, subset: &BTreeSet<usize>) -> bool {
    let Some(&start) = subset.iter().next() else {
        return false;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in g.neighbors(x) {
            if subset.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == subset.len()
}

pub fn is_tree(g: &Graph) -> bool {
    g.edge_count() + 1 == g.vertex_count() && is_connected(g)
}

/// `t` is a spanning tree of `g`: same vertices, `E(t) ⊆ E(g)`, connected, `|V|-1` edges.
pub fn is_spanning_tree(g: &Graph, t: &Graph) -> bool {
    t.same_vertices(g)
        && t.edge_count() + 1 == g.vertex_count()
        && t.edges_subset_of(g)
        && is_connected(t)
}

/// Edges of `g` not in `t`, in sorted order.
pub fn non_tree_edges(g: &Graph, t: &Graph) -> Vec<Edge> {
    g.edges().iter().copied().filter(|&(a, b)| !t.has_edge(a, b)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle4() -> Graph {
        Graph::new(["u", "h", "v", "h'"], [("u", "h"), ("h", "v"), ("v", "h'"), ("h'", "u")]).unwrap()
    }

    #[test]
    fn connectivity_examples() {
        assert!(is_connected(&Graph::new(["a"], Vec::<(&str, &str)>::new()).unwrap()));
        assert!(!is_connected(&Graph::new(["a", "b"], Vec::<(&str, &str)>::new()).unwrap()));
        assert!(is_connected(&cycle4()));
    }

    #[test]
    fn constructor_rejects_malformed_input() {
        assert_eq!(Graph::new(Vec::<&str>::new(), Vec::<(&str, &str)>::new()), Err(GraphError::Empty));
        assert_eq!(Graph::new(["a"], [("a", "a")]), Err(GraphError::Loop("a".into())));
        assert_eq!(
            Graph::new(["a", "b"], [("a", "b"), ("b", "a")]),
            Err(GraphError::ParallelEdge("a".into(), "b".into()))
        );
        assert_eq!(Graph::new(["a"], [("a", "z")]), Err(GraphError::UnknownVertex("z".into())));
        assert_eq!(
            Graph::new(["a", "a"], Vec::<(&str, &str)>::new()),
            Err(GraphError::DuplicateVertex("a".into()))
        );
    }

    #[test]
    fn spanning_tree_examples() {
        let g = cycle4();
        let path = Graph::new(["u", "h", "v", "h'"], [("u", "h"), ("h", "v"), ("v", "h'")]).unwrap();
        assert!(is_spanning_tree(&g, &path));
        assert!(!is_spanning_tree(&g, &g));
        let short = Graph::new(["u", "h", "v"], [("u", "h"), ("h", "v")]).unwrap();
        assert!(!is_spanning_tree(&g, &short));
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = cycle4();
        let keep = g.indices_of([&"u".into(), &"h".into(), &"v".into()]).unwrap();
        let sub = g.induced_subgraph(&keep).unwrap();
        assert_eq!(sub.vertex_count(), 3);
        assert_eq!(sub.edge_count(), 2);
        assert!(is_tree(&sub));
    }

    #[test]
    fn path_ids_sort_in_path_order() {
        let p = Graph::path(12).unwrap();
        assert_eq!(p.id(0).as_str(), "p00");
        assert_eq!(p.id(11).as_str(), "p11");
        assert!((0..11).all(|i| p.has_edge(i, i + 1)));
    }
}
