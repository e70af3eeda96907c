use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{validate, DecompositionError, TreeDecomposition};
use crate::constructions::GadgetInstance;
use crate::graph::{is_spanning_tree, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Freedom {
    /// `T_v` meets `V(G)`.
    Free,
    Constrained,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub freedom: BTreeMap<VertexId, Freedom>,
    /// For each base vertex `a_j`: whether `a_j ∈ T_{a_j}`.
    pub grounded: BTreeMap<VertexId, bool>,
}

impl Classification {
    pub fn free_count(&self) -> usize {
        self.freedom.values().filter(|f| **f == Freedom::Free).count()
    }

    pub fn ungrounded(&self) -> impl Iterator<Item = &VertexId> {
        self.grounded.iter().filter(|(_, g)| !**g).map(|(v, _)| v)
    }
}

/// Free/constrained split of `V(G̃)` and grounded split of `V(G)` for a valid
/// decomposition of the gadget graph hosted on one of its spanning trees.
pub fn classify_vertices(
    inst: &GadgetInstance,
    td: &TreeDecomposition,
) -> Result<Classification, DecompositionError> {
    let g = &inst.graph;
    if !is_spanning_tree(g, td.host()) {
        return Err(DecompositionError::HostNotSpanning);
    }
    let report = validate(g, td)?;
    if !report.valid {
        return Err(DecompositionError::Invalid(report));
    }
    let subtrees = td.all_subtrees();
    let host = td.host();
    let mut freedom = BTreeMap::new();
    for v in g.ids() {
        let meets_base = subtrees[v].iter().any(|&x| inst.base.contains(host.id(x).as_str()));
        freedom.insert(v.clone(), if meets_base { Freedom::Free } else { Freedom::Constrained });
    }
    let grounded = inst
        .base
        .ids()
        .iter()
        .map(|a| {
            let x = host.index_of(a.as_str()).expect("host spans G̃");
            (a.clone(), subtrees[a].contains(&x))
        })
        .collect();
    Ok(Classification { freedom, grounded })
}
