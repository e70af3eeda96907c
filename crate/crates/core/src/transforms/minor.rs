use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::decomposition::{validate, TreeDecomposition};
use crate::graph::{
    edge, is_connected, is_connected_subset, is_spanning_tree, is_tree, Edge, Graph, VertexId,
};

/// A model of the pattern tree `T` as a minor of `G`: disjoint connected branch
/// sets `Q_x` and, per pattern edge `xy`, an edge `e_xy` of `G` joining `Q_x` and `Q_y`.
///
/// The model may be invalid; [`validate_model`] reports what is wrong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorModel {
    host: Graph,
    pattern: Graph,
    /// Indexed by pattern vertex; holds host indices.
    branch_sets: Vec<BTreeSet<usize>>,
    /// Pattern edge (pattern indices) ↦ host vertex pair (host indices, as given).
    edge_map: BTreeMap<Edge, (usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelViolation {
    PatternNotTree,
    EmptyBranchSet { node: VertexId },
    DisconnectedBranchSet { node: VertexId },
    OverlappingBranchSets { vertex: VertexId, nodes: [VertexId; 2] },
    MissingEdge { pattern_edge: [VertexId; 2] },
    EdgeNotInGraph { pattern_edge: [VertexId; 2] },
    EdgeWrongEnds { pattern_edge: [VertexId; 2] },
    MappedNonEdge { pattern_edge: [VertexId; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub valid: bool,
    pub violations: Vec<ModelViolation>,
}

impl std::fmt::Display for ModelReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.valid {
            f.write_str("valid")
        } else {
            write!(f, "{} violation(s): {:?}", self.violations.len(), self.violations)
        }
    }
}

impl MinorModel {
    /// Builds a model from identifiers. Branch sets missing for a pattern vertex are
    /// recorded as empty; unknown identifiers are an error.
    pub fn new(
        host: Graph,
        pattern: Graph,
        branch_sets: &BTreeMap<VertexId, BTreeSet<VertexId>>,
        edge_map: &BTreeMap<(VertexId, VertexId), (VertexId, VertexId)>,
    ) -> Result<Self, TransformError> {
        let mut sets = vec![BTreeSet::new(); pattern.vertex_count()];
        for (x, q) in branch_sets {
            sets[pattern.require(x)?] = host.indices_of(q)?;
        }
        let mut map = BTreeMap::new();
        for ((x, y), (a, b)) in edge_map {
            let pe = edge(pattern.require(x)?, pattern.require(y)?);
            let (ia, ib) = (host.require(a)?, host.require(b)?);
            // orient the host pair so that its first end is meant for the smaller pattern end
            let oriented = if pattern.require(x)? == pe.0 { (ia, ib) } else { (ib, ia) };
            map.insert(pe, oriented);
        }
        Ok(MinorModel { host, pattern, branch_sets: sets, edge_map: map })
    }

    /// `Q_x = {x}`, `e_xy = xy` for a tree that is its own minor.
    pub fn identity(tree: &Graph) -> Self {
        MinorModel {
            host: tree.clone(),
            pattern: tree.clone(),
            branch_sets: (0..tree.vertex_count()).map(|i| BTreeSet::from([i])).collect(),
            edge_map: tree.edges().iter().map(|&e| (e, e)).collect(),
        }
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    /// `Q_x` as host identifiers.
    pub fn branch_set(&self, x: &VertexId) -> Option<BTreeSet<VertexId>> {
        let i = self.pattern.index_of(x.as_str())?;
        Some(self.branch_sets[i].iter().map(|&v| self.host.id(v).clone()).collect())
    }

    pub fn branch_sets(&self) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        self.pattern.ids().iter().filter_map(|x| Some((x.clone(), self.branch_set(x)?))).collect()
    }

    /// `e_xy` as host identifiers.
    pub fn connecting_edge(&self, x: &VertexId, y: &VertexId) -> Option<(VertexId, VertexId)> {
        let pe = edge(self.pattern.index_of(x.as_str())?, self.pattern.index_of(y.as_str())?);
        let &(a, b) = self.edge_map.get(&pe)?;
        Some((self.host.id(a).clone(), self.host.id(b).clone()))
    }

    /// True iff the branch sets cover every host vertex.
    pub fn is_covering(&self) -> bool {
        self.branch_sets.iter().map(BTreeSet::len).sum::<usize>() == self.host.vertex_count()
            && self.owner_map().iter().all(Option::is_some)
    }

    fn owner_map(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.host.vertex_count()];
        for (x, q) in self.branch_sets.iter().enumerate() {
            for &v in q {
                owner[v].get_or_insert(x);
            }
        }
        owner
    }

    fn pattern_pair(&self, e: Edge) -> [VertexId; 2] {
        [self.pattern.id(e.0).clone(), self.pattern.id(e.1).clone()]
    }
}

/// Every violated model invariant.
pub fn validate_model(m: &MinorModel) -> ModelReport {
    let mut violations = Vec::new();
    if !is_tree(&m.pattern) {
        violations.push(ModelViolation::PatternNotTree);
    }
    let mut owner: Vec<Option<usize>> = vec![None; m.host.vertex_count()];
    for (x, q) in m.branch_sets.iter().enumerate() {
        let node = m.pattern.id(x).clone();
        if q.is_empty() {
            violations.push(ModelViolation::EmptyBranchSet { node: node.clone() });
        } else if !is_connected_subset(&m.host, q) {
            violations.push(ModelViolation::DisconnectedBranchSet { node: node.clone() });
        }
        for &v in q {
            match owner[v] {
                Some(y) => violations.push(ModelViolation::OverlappingBranchSets {
                    vertex: m.host.id(v).clone(),
                    nodes: [m.pattern.id(y).clone(), node.clone()],
                }),
                None => owner[v] = Some(x),
            }
        }
    }
    for &pe in m.pattern.edges() {
        let pair = m.pattern_pair(pe);
        let Some(&(a, b)) = m.edge_map.get(&pe) else {
            violations.push(ModelViolation::MissingEdge { pattern_edge: pair });
            continue;
        };
        if !m.host.has_edge(a, b) {
            violations.push(ModelViolation::EdgeNotInGraph { pattern_edge: pair });
            continue;
        }
        let (qx, qy) = (&m.branch_sets[pe.0], &m.branch_sets[pe.1]);
        let fits = (qx.contains(&a) && qy.contains(&b)) || (qx.contains(&b) && qy.contains(&a));
        if !fits {
            violations.push(ModelViolation::EdgeWrongEnds { pattern_edge: pair });
        }
    }
    for &pe in m.edge_map.keys() {
        if !m.pattern.has_edge(pe.0, pe.1) {
            violations.push(ModelViolation::MappedNonEdge { pattern_edge: m.pattern_pair(pe) });
        }
    }
    ModelReport { valid: violations.is_empty(), violations }
}

/// Extends the branch sets until they cover `V(G)`.
///
/// Uncovered vertices are absorbed layer by layer in breadth-first order from the
/// covered region; each joins the smallest-named branch set among its neighbours
/// in the previous layer.
pub fn complete_model(m: &MinorModel) -> Result<MinorModel, TransformError> {
    let report = validate_model(m);
    if !report.valid {
        return Err(TransformError::InvalidModel(report));
    }
    if !is_connected(&m.host) {
        return Err(TransformError::HostDisconnected);
    }
    let mut owner = m.owner_map();
    let mut frontier: Vec<usize> = (0..owner.len()).filter(|&v| owner[v].is_some()).collect();
    while !frontier.is_empty() {
        let mut next: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in &frontier {
            let x = owner[v].expect("frontier is covered");
            for &w in m.host.neighbors(v) {
                if owner[w].is_none() {
                    let slot = next.entry(w).or_insert(x);
                    if m.pattern.id(x) < m.pattern.id(*slot) {
                        *slot = x;
                    }
                }
            }
        }
        for (&w, &x) in &next {
            owner[w] = Some(x);
        }
        frontier = next.into_keys().collect();
    }
    let mut out = m.clone();
    for (v, x) in owner.into_iter().enumerate() {
        out.branch_sets[x.expect("connected host is fully reached")].insert(v);
    }
    Ok(out)
}

/// BFS spanning tree of `G[Q]` from the smallest vertex of `Q`.
fn branch_tree(g: &Graph, q: &BTreeSet<usize>) -> Vec<Edge> {
    let Some(&start) = q.iter().next() else {
        return Vec::new();
    };
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if q.contains(&y) && seen.insert(y) {
                edges.push(edge(x, y));
                queue.push_back(y);
            }
        }
    }
    edges
}

/// Turns a decomposition hosted on a minor `T` of `g` into one of the same width
/// hosted on a spanning tree `T'` of `g`, with `T'_v = ⋃_{x ∈ T_v} Q_x`.
pub fn minor_to_spanning(
    g: &Graph,
    td: &TreeDecomposition,
    m: &MinorModel,
) -> Result<TreeDecomposition, TransformError> {
    if m.host != *g {
        return Err(TransformError::PatternMismatch("model is for a different host graph".into()));
    }
    if td.host() != m.pattern() {
        return Err(TransformError::PatternMismatch(
            "decomposition host differs from the model's pattern tree".into(),
        ));
    }
    let report = validate(g, td)?;
    if !report.valid {
        return Err(TransformError::InvalidDecomposition(report));
    }
    let model = complete_model(m)?;

    let mut tree_edges = Vec::with_capacity(g.vertex_count().saturating_sub(1));
    for q in &model.branch_sets {
        tree_edges.extend(branch_tree(g, q));
    }
    for &(a, b) in model.edge_map.values() {
        tree_edges.push(edge(a, b));
    }
    let host = g.spanning_subgraph(tree_edges)?;
    if !is_spanning_tree(g, &host) {
        return Err(TransformError::Internal("union of branch trees and connecting edges is not a spanning tree".into()));
    }
    let owner = model.owner_map();
    let bags = (0..g.vertex_count())
        .map(|y| td.bag(owner[y].expect("complete model covers V(G)")).clone())
        .collect();
    Ok(TreeDecomposition::from_indexed(host, bags))
}

/// Wire form: `{"branch_sets": {"x": [...]}, "pattern_edges": [["x","y"]], "edge_map": {"x,y": ["a","b"]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModelJson {
    pub branch_sets: BTreeMap<VertexId, BTreeSet<VertexId>>,
    pub pattern_edges: Vec<[VertexId; 2]>,
    pub edge_map: BTreeMap<String, [VertexId; 2]>,
}

impl MinorModelJson {
    pub fn into_model(self, host: &Graph) -> Result<MinorModel, TransformError> {
        let mut nodes: BTreeSet<VertexId> = self.branch_sets.keys().cloned().collect();
        nodes.extend(self.pattern_edges.iter().flatten().cloned());
        let pattern = Graph::new(nodes, self.pattern_edges.iter().map(|[a, b]| (a.clone(), b.clone())))?;
        let mut map = BTreeMap::new();
        for (key, [a, b]) in self.edge_map {
            let (x, y) = key
                .split_once(',')
                .ok_or_else(|| TransformError::Parse(format!("edge_map key `{key}` is not of the form x,y")))?;
            map.insert((VertexId::from(x), VertexId::from(y)), (a, b));
        }
        MinorModel::new(host.clone(), pattern, &self.branch_sets, &map)
    }
}

impl From<&MinorModel> for MinorModelJson {
    fn from(m: &MinorModel) -> Self {
        let p = &m.pattern;
        MinorModelJson {
            branch_sets: m.branch_sets(),
            pattern_edges: p.edges().iter().map(|&(a, b)| [p.id(a).clone(), p.id(b).clone()]).collect(),
            edge_map: m
                .edge_map
                .iter()
                .map(|(&(x, y), &(a, b))| {
                    (format!("{},{}", p.id(x), p.id(y)), [m.host.id(a).clone(), m.host.id(b).clone()])
                })
                .collect(),
        }
    }
}
