use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::TransformError;
use crate::constructions::GadgetInstance;
use crate::decomposition::{classify_vertices, is_anchored, validate, TreeDecomposition, ValidationReport};
use crate::graph::{is_spanning_tree, VertexId};

/// Result of [`reduce_to_anchored`], kept whole even when the output is invalid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reduction {
    pub decomposition: TreeDecomposition,
    /// Base vertices that were ungrounded in the input and got injected into their own bag.
    pub injected: Vec<VertexId>,
    pub input_width: i64,
    pub output_width: i64,
    pub report: ValidationReport,
    pub anchored: bool,
    pub warnings: Vec<String>,
}

/// Restricts a decomposition of `G̃` hosted on a spanning tree `T` to the base
/// graph: host `T[V(G)]`, bags `B_x ∩ V(G)`, and every ungrounded `a_j` added to `B_{a_j}`.
///
/// A width above `k` is only a warning. An invalid output is an error carrying the
/// full [`Reduction`]; for a genuine schedule within its hypothesis that would be a
/// counterexample and is reported as internal.
pub fn reduce_to_anchored(inst: &GadgetInstance, td: &TreeDecomposition) -> Result<Reduction, TransformError> {
    let g = &inst.graph;
    if !is_spanning_tree(g, td.host()) {
        return Err(TransformError::HostNotSpanning);
    }
    let report = validate(g, td)?;
    if !report.valid {
        return Err(TransformError::InvalidDecomposition(report));
    }
    let classes = classify_vertices(inst, td)?;
    let base = &inst.base;

    let mut warnings = Vec::new();
    let input_width = td.width();
    let within_hypothesis = input_width <= inst.k() as i64;
    if !within_hypothesis {
        warnings.push(format!("input width {input_width} exceeds k = {}; the hypothesis does not hold", inst.k()));
    }
    if inst.schedule.toy {
        warnings.push("toy schedule: growth conditions are not met, validity is not guaranteed".into());
    }

    let host = td.host().induced_by_ids(base.ids())?;
    if !is_spanning_tree(base, &host) {
        return Err(TransformError::Internal("T[V(G)] is not a spanning tree of G".into()));
    }
    let mut injected = Vec::new();
    let bags: Vec<BTreeSet<VertexId>> = host
        .ids()
        .iter()
        .map(|a| {
            let mut bag: BTreeSet<VertexId> =
                td.bag_of(a.as_str()).into_iter().flatten().filter(|v| base.contains(v.as_str())).cloned().collect();
            if !classes.grounded[a] {
                bag.insert(a.clone());
                injected.push(a.clone());
            }
            bag
        })
        .collect();
    let out = TreeDecomposition::from_indexed(host, bags);
    let report = validate(base, &out)?;
    let anchored = report.valid && is_anchored(base, &out)?;
    let reduction = Reduction {
        output_width: out.width(),
        decomposition: out,
        injected,
        input_width,
        report,
        anchored,
        warnings,
    };
    if reduction.report.valid {
        Ok(reduction)
    } else if !inst.schedule.toy && within_hypothesis {
        Err(TransformError::Internal(format!(
            "reduction of a genuine instance within its hypothesis is invalid: {}",
            reduction.report
        )))
    } else {
        Err(TransformError::ReductionInvalid(Box::new(reduction)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{attach_gadgets, toy_schedule};
    use crate::decomposition::Violation;
    use crate::graph::Graph;
    use std::collections::BTreeMap;

    fn k2_instance() -> GadgetInstance {
        let k2 = Graph::new(["a", "b"], [("a", "b")]).unwrap();
        let s = toy_schedule(1, 2, &[1, 1], &[1, 1]).unwrap();
        attach_gadgets(&k2, &["a".into(), "b".into()], &s, 100).unwrap()
    }

    fn subtrees(items: &[(&str, &[&str])]) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
        items
            .iter()
            .map(|(v, xs)| (VertexId::from(*v), xs.iter().map(|&x| VertexId::from(x)).collect()))
            .collect()
    }

    fn ids(items: &[&str]) -> BTreeSet<VertexId> {
        items.iter().map(|&s| VertexId::from(s)).collect()
    }

    #[test]
    fn shared_base_bag_restricts_to_the_base_edge() {
        let inst = k2_instance();
        let bags = BTreeMap::from([
            ("a#0".into(), ids(&["a", "a#0"])),
            ("a".into(), ids(&["a", "b"])),
            ("b".into(), ids(&["a", "b"])),
            ("b#0".into(), ids(&["b", "b#0"])),
        ]);
        let td = TreeDecomposition::new(inst.graph.clone(), bags).unwrap();
        let r = reduce_to_anchored(&inst, &td).unwrap();
        assert_eq!(r.decomposition.host().edge_count(), 1);
        assert!(r.decomposition.indexed_bags().iter().all(|b| *b == ids(&["a", "b"])));
        assert!(r.anchored);
        assert_eq!(r.output_width, 1);
        assert!(r.injected.is_empty());
    }

    #[test]
    fn ungrounded_vertex_is_injected() {
        let inst = k2_instance();
        let td = TreeDecomposition::from_subtrees(
            inst.graph.clone(),
            &subtrees(&[("a#0", &["a#0"]), ("a", &["a#0"]), ("b", &["a#0", "a", "b"]), ("b#0", &["b", "b#0"])]),
        )
        .unwrap();
        let r = reduce_to_anchored(&inst, &td).unwrap();
        assert_eq!(r.injected, vec![VertexId::from("a")]);
        assert_eq!(r.decomposition.bag_of("a").unwrap(), &ids(&["a", "b"]));
        assert!(r.anchored);
        assert!(r.output_width <= r.input_width + 1);
    }

    #[test]
    fn adjacent_ungrounded_vertices_break_the_toy_reduction() {
        let inst = k2_instance();
        let td = TreeDecomposition::from_subtrees(
            inst.graph.clone(),
            &subtrees(&[
                ("a", &["b#0"]),
                ("b", &["b#0"]),
                ("a#0", &["a#0", "a", "b", "b#0"]),
                ("b#0", &["b#0"]),
            ]),
        )
        .unwrap();
        let Err(TransformError::ReductionInvalid(r)) = reduce_to_anchored(&inst, &td) else {
            panic!("expected an invalid reduction");
        };
        assert_eq!(r.injected.len(), 2);
        assert!(r
            .report
            .violations
            .contains(&Violation::UncoveredEdge { edge: ["a".into(), "b".into()] }));
    }

    #[test]
    fn rejects_foreign_hosts() {
        let inst = k2_instance();
        let td = TreeDecomposition::new(
            Graph::new(["a", "b"], [("a", "b")]).unwrap(),
            BTreeMap::from([("a".into(), ids(&["a", "b", "a#0", "b#0"]))]),
        )
        .unwrap();
        assert!(matches!(reduce_to_anchored(&inst, &td), Err(TransformError::HostNotSpanning)));
    }
}
