use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::quantity::Quantity;
use super::schedule::GadgetSchedule;
use super::ConstructionError;
use crate::graph::{Graph, RootedTree, VertexId};

/// Default cap on the number of vertices any construction may materialize.
pub const DEFAULT_MATERIALIZATION_CAP: u64 = 500_000;

/// Complete rooted `w`-ary tree of height `h` with root `s`.
pub fn complete_ary_tree(w: u64, h: u64, cap: u64) -> Result<RootedTree, ConstructionError> {
    complete_ary_tree_rooted(&VertexId::from("s"), w, h, cap)
}

/// Same as [`complete_ary_tree`] with the given root identifier. Descendants are
/// named `{root}#{i}.{j}…` by their child-index path.
pub fn complete_ary_tree_rooted(
    root: &VertexId,
    w: u64,
    h: u64,
    cap: u64,
) -> Result<RootedTree, ConstructionError> {
    if w == 0 {
        return Err(ConstructionError::InvalidParameter("tree width must be at least 1".into()));
    }
    let size = Quantity::geometric_sum(&Quantity::from_u64(w), &Quantity::from_u64(h));
    if size.to_u64().is_none_or(|s| s > cap) {
        return Err(ConstructionError::SizeExceeded { total: size, cap });
    }
    let (ids, edges) = ary_tree_parts(root, w, h);
    let graph = Graph::new(ids, edges)?;
    Ok(RootedTree::with_root_id(graph, root)?)
}

fn ary_tree_parts(root: &VertexId, w: u64, h: u64) -> (Vec<VertexId>, Vec<(VertexId, VertexId)>) {
    let mut ids = vec![root.clone()];
    let mut edges = Vec::new();
    let mut level: Vec<(VertexId, String)> = vec![(root.clone(), String::new())];
    for _ in 0..h {
        let mut next = Vec::with_capacity(level.len() * w as usize);
        for (parent, path) in &level {
            for i in 0..w {
                let child_path = if path.is_empty() { i.to_string() } else { format!("{path}.{i}") };
                let child = VertexId::new(format!("{root}#{child_path}"));
                ids.push(child.clone());
                edges.push((parent.clone(), child.clone()));
                next.push((child, child_path));
            }
        }
        level = next;
    }
    (ids, edges)
}

/// `S_j` attached at `a_j`, using the identifiers of the gadget graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attachment {
    pub anchor: VertexId,
    pub width: u64,
    pub height: u64,
    pub tree: RootedTree,
}

impl Attachment {
    pub fn vertices(&self) -> &[VertexId] {
        self.tree.graph().ids()
    }
}

/// `G̃`: the base graph with a complete tree hung from every vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct GadgetInstance {
    pub base: Graph,
    pub ordering: Vec<VertexId>,
    pub schedule: GadgetSchedule,
    pub graph: Graph,
    /// `attachments[j-1]` is `S_j`, rooted at `ordering[j-1]`.
    pub attachments: Vec<Attachment>,
}

/// Builds `G̃` by identifying each `a_j` with the root of `S_j`.
pub fn attach_gadgets(
    g: &Graph,
    ordering: &[VertexId],
    schedule: &GadgetSchedule,
    cap: u64,
) -> Result<GadgetInstance, ConstructionError> {
    check_ordering(g, ordering)?;
    if schedule.n != g.vertex_count() || schedule.entries.len() != schedule.n {
        return Err(ConstructionError::OrderingMismatch(format!(
            "schedule is for {} vertices, graph has {}",
            schedule.n,
            g.vertex_count()
        )));
    }
    let total = schedule.total_vertices();
    if total.to_u64().is_none_or(|t| t > cap) {
        return Err(ConstructionError::SizeExceeded { total, cap });
    }

    let mut vertices: Vec<VertexId> = g.ids().to_vec();
    let mut edges: Vec<(VertexId, VertexId)> =
        g.edges().iter().map(|&(a, b)| (g.id(a).clone(), g.id(b).clone())).collect();
    let mut seen: BTreeSet<VertexId> = vertices.iter().cloned().collect();
    let mut attachments = Vec::with_capacity(ordering.len());
    for (a, entry) in ordering.iter().zip(&schedule.entries) {
        let (w, h) = (
            entry.width.to_u64().expect("bounded by total"),
            entry.height.to_u64().expect("bounded by total"),
        );
        let tree = complete_ary_tree_rooted(a, w, h, cap)?;
        for id in tree.graph().ids() {
            if id != a && !seen.insert(id.clone()) {
                return Err(ConstructionError::IdCollision(id.clone()));
            }
        }
        let tg = tree.graph();
        vertices.extend(tg.ids().iter().filter(|id| *id != a).cloned());
        edges.extend(tg.edges().iter().map(|&(x, y)| (tg.id(x).clone(), tg.id(y).clone())));
        attachments.push(Attachment { anchor: a.clone(), width: w, height: h, tree });
    }
    let graph = Graph::new(vertices, edges)?;
    Ok(GadgetInstance {
        base: g.clone(),
        ordering: ordering.to_vec(),
        schedule: schedule.clone(),
        graph,
        attachments,
    })
}

fn check_ordering(g: &Graph, ordering: &[VertexId]) -> Result<(), ConstructionError> {
    let set: BTreeSet<&VertexId> = ordering.iter().collect();
    if set.len() != ordering.len() {
        return Err(ConstructionError::OrderingMismatch("ordering repeats a vertex".into()));
    }
    if ordering.len() != g.vertex_count() || ordering.iter().any(|v| !g.contains(v.as_str())) {
        return Err(ConstructionError::OrderingMismatch(
            "ordering is not a permutation of the graph's vertices".into(),
        ));
    }
    Ok(())
}

impl GadgetInstance {
    pub fn k(&self) -> u64 {
        self.schedule.k
    }

    /// Index `j` (1-based) of the attachment a gadget-graph vertex belongs to,
    /// `None` for vertices of the base graph.
    pub fn attachment_of(&self, v: &VertexId) -> Option<usize> {
        if self.base.contains(v.as_str()) {
            return None;
        }
        self.attachments.iter().position(|a| a.tree.graph().contains(v.as_str())).map(|p| p + 1)
    }

    /// Structural problems (empty when `G̃` matches its schedule).
    pub fn check_structure(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut covered: BTreeSet<VertexId> = self.base.ids().iter().cloned().collect();
        for (j, att) in self.attachments.iter().enumerate() {
            let t = &att.tree;
            let tg = t.graph();
            let leaves_ok = (0..tg.vertex_count()).all(|i| {
                let kids = t.children(i).count() as u64;
                if t.depth(i) as u64 == att.height { kids == 0 } else { kids == att.width }
            });
            if !leaves_ok || tg.id(t.root()) != &att.anchor {
                out.push(format!("S_{} is not a complete {}-ary tree of height {}", j + 1, att.width, att.height));
            }
            for v in tg.ids().iter().filter(|v| **v != att.anchor) {
                covered.insert(v.clone());
                let i = self.graph.index_of(v.as_str()).expect("attached vertex in G̃");
                for &y in self.graph.neighbors(i) {
                    if !tg.contains(self.graph.id(y).as_str()) {
                        out.push(format!("{v} is adjacent to {} outside S_{}", self.graph.id(y), j + 1));
                    }
                }
            }
        }
        if covered.len() != self.graph.vertex_count() {
            out.push("G̃ has vertices outside G and the attached trees".into());
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct AttachmentJson {
    anchor: VertexId,
    width: u64,
    height: u64,
    vertices: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    base: Graph,
    ordering: Vec<VertexId>,
    schedule: GadgetSchedule,
    graph: Graph,
    attachments: Vec<AttachmentJson>,
}

impl Serialize for GadgetInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        InstanceJson {
            base: self.base.clone(),
            ordering: self.ordering.clone(),
            schedule: self.schedule.clone(),
            graph: self.graph.clone(),
            attachments: self
                .attachments
                .iter()
                .map(|a| AttachmentJson {
                    anchor: a.anchor.clone(),
                    width: a.width,
                    height: a.height,
                    vertices: a.vertices().to_vec(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GadgetInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let j = InstanceJson::deserialize(d)?;
        let mut attachments = Vec::new();
        for a in j.attachments {
            let sub = j.graph.induced_by_ids(&a.vertices).map_err(D::Error::custom)?;
            let tree = RootedTree::with_root_id(sub, &a.anchor).map_err(D::Error::custom)?;
            attachments.push(Attachment { anchor: a.anchor, width: a.width, height: a.height, tree });
        }
        let inst = GadgetInstance {
            base: j.base,
            ordering: j.ordering,
            schedule: j.schedule,
            graph: j.graph,
            attachments,
        };
        check_ordering(&inst.base, &inst.ordering).map_err(D::Error::custom)?;
        let problems = inst.check_structure();
        if !problems.is_empty() {
            return Err(D::Error::custom(problems.join("; ")));
        }
        Ok(inst)
    }
}

/// DOT rendering with one cluster per attached tree.
pub fn gadget_to_dot(inst: &GadgetInstance) -> String {
    use crate::graph::dot_quote as quote;
    use std::fmt::Write;
    let mut out = String::from("graph \"gadget\" {\n");
    let mut placed: BTreeMap<&VertexId, ()> = BTreeMap::new();
    for (j, att) in inst.attachments.iter().enumerate() {
        writeln!(out, "  subgraph \"cluster_S{}\" {{", j + 1).unwrap();
        writeln!(out, "    label={};", quote(&format!("S_{} at {}", j + 1, att.anchor))).unwrap();
        for v in att.vertices() {
            if *v != att.anchor {
                writeln!(out, "    {};", quote(v.as_str())).unwrap();
                placed.insert(v, ());
            }
        }
        out.push_str("  }\n");
    }
    for v in inst.base.ids() {
        writeln!(out, "  {} [shape=doublecircle];", quote(v.as_str())).unwrap();
    }
    let g = &inst.graph;
    for &(a, b) in g.edges() {
        writeln!(out, "  {} -- {};", quote(g.id(a).as_str()), quote(g.id(b).as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gadget_schedule, toy_schedule};
    use crate::graph::is_connected;
    use num_bigint::BigUint;

    fn k2() -> Graph {
        Graph::new(["a", "b"], [("a", "b")]).unwrap()
    }

    fn ids(v: &[&str]) -> Vec<VertexId> {
        v.iter().map(|&s| VertexId::from(s)).collect()
    }

    #[test]
    fn complete_tree_sizes() {
        assert_eq!(complete_ary_tree(2, 2, 100).unwrap().graph().vertex_count(), 7);
        let path = complete_ary_tree(1, 3, 100).unwrap();
        assert_eq!(path.graph().vertex_count(), 4);
        assert_eq!(path.height(), 3);
        assert_eq!(complete_ary_tree(3, 2, 100).unwrap().graph().vertex_count(), 13);
        assert!(matches!(complete_ary_tree(3, 20, 1000), Err(ConstructionError::SizeExceeded { .. })));
    }

    #[test]
    fn complete_tree_shape() {
        let t = complete_ary_tree(3, 3, 1000).unwrap();
        for i in 0..t.graph().vertex_count() {
            let kids = t.children(i).count();
            if t.depth(i) == 3 {
                assert_eq!(kids, 0);
            } else {
                assert_eq!(kids, 3);
            }
        }
    }

    #[test]
    fn toy_gadget_on_an_edge_is_a_path() {
        let s = toy_schedule(1, 2, &[1, 1], &[1, 1]).unwrap();
        let inst = attach_gadgets(&k2(), &ids(&["a", "b"]), &s, 100).unwrap();
        assert_eq!(inst.graph.vertex_count(), 4);
        assert_eq!(inst.graph.edge_count(), 3);
        assert!(crate::graph::is_tree(&inst.graph));
        assert!(inst.check_structure().is_empty());
        assert_eq!(inst.attachment_of(&"a#0".into()), Some(1));
        assert_eq!(inst.attachment_of(&"b".into()), None);
    }

    #[test]
    fn toy_gadget_on_the_four_cycle() {
        let c4 = Graph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let s = toy_schedule(1, 4, &[1, 1, 1, 1], &[3, 3, 3, 3]).unwrap();
        let inst = attach_gadgets(&c4, &ids(&["a", "b", "c", "d"]), &s, 100).unwrap();
        assert_eq!(inst.graph.vertex_count(), 16);
        assert!(is_connected(&inst.graph));
    }

    #[test]
    fn genuine_schedule_reports_exact_size() {
        let s = gadget_schedule(1, 2).unwrap();
        let err = attach_gadgets(&k2(), &ids(&["a", "b"]), &s, DEFAULT_MATERIALIZATION_CAP).unwrap_err();
        let ConstructionError::SizeExceeded { total, .. } = err else { panic!("{err:?}") };
        let floor = (BigUint::from(5u32).pow(83) - 1u32) / 4u32;
        assert!(total.exact().unwrap() >= &floor);
    }

    #[test]
    fn genuine_single_vertex_schedule_materializes() {
        let g = Graph::new(["a"], Vec::<(&str, &str)>::new()).unwrap();
        let inst = attach_gadgets(&g, &ids(&["a"]), &gadget_schedule(1, 1).unwrap(), 100).unwrap();
        assert_eq!(inst.graph.vertex_count(), 13);
    }

    #[test]
    fn ordering_must_be_a_permutation() {
        let s = toy_schedule(1, 2, &[1, 1], &[1, 1]).unwrap();
        assert!(attach_gadgets(&k2(), &ids(&["a", "a"]), &s, 100).is_err());
        assert!(attach_gadgets(&k2(), &ids(&["a"]), &s, 100).is_err());
        assert!(attach_gadgets(&k2(), &ids(&["a", "z"]), &s, 100).is_err());
    }

    #[test]
    fn instance_json_round_trips() {
        let s = toy_schedule(1, 2, &[2, 1], &[2, 3]).unwrap();
        let inst = attach_gadgets(&k2(), &ids(&["b", "a"]), &s, 100).unwrap();
        let text = serde_json::to_string(&inst).unwrap();
        let back: GadgetInstance = serde_json::from_str(&text).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn anchors_are_cut_vertices() {
        let c4 = Graph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        let s = toy_schedule(1, 4, &[2, 1, 2, 1], &[2, 2, 1, 3]).unwrap();
        let inst = attach_gadgets(&c4, &ids(&["a", "b", "c", "d"]), &s, 100).unwrap();
        let g = &inst.graph;
        for att in &inst.attachments {
            let keep: BTreeSet<usize> =
                (0..g.vertex_count()).filter(|&i| *g.id(i) != att.anchor).collect();
            let rest = g.induced_subgraph(&keep).unwrap();
            let comps = crate::graph::components(&rest);
            // the base side plus one component per child subtree of the anchor
            assert_eq!(comps.len(), 1 + att.width as usize);
        }
    }
}
