//! Width lower-bound certificates for reflected-trees.
//!
//! For a spanning tree `T` of `G_r`, a certificate is a matching `M` of `r-1`
//! non-tree edges whose fundamental cycles all share an edge of the `u`–`v` tree
//! path. Any anchored decomposition hosted on `T` must then put an endpoint of
//! every matching edge into the bag at the shared hub.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::constructions::ReflectedTree;
use crate::decomposition::{is_anchored, validate, DecompositionError, TreeDecomposition};
use crate::graph::{
    components, edge, is_connected, is_spanning_tree, non_tree_edges, tree_path, FundamentalCycle, Graph,
    GraphError, RootedTree, VertexId,
};

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("certificates need level r ≥ 2, got {0}")]
    InvalidLevel(u32),
    #[error("tree is not a spanning tree of the reflected-tree")]
    NotSpanning,
    #[error("structure violation: {0}")]
    StructureViolation(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("counterexample: neither {} nor {} is in the hub bag", .0[0], .0[1])]
    CounterexampleToLemma([VertexId; 2]),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthCertificate {
    pub level: u32,
    pub tree: Graph,
    /// Matching edges, each written with its smaller identifier first.
    pub matching: Vec<[VertexId; 2]>,
    pub hub: VertexId,
    /// Shared edge of every fundamental cycle and of the `u`–`v` tree path.
    pub witness_edge: [VertexId; 2],
    /// `V(C^e_T)` for each matching edge, in matching order.
    pub cycles: Vec<BTreeSet<VertexId>>,
}

fn pair(a: &VertexId, b: &VertexId) -> [VertexId; 2] {
    if a <= b {
        [a.clone(), b.clone()]
    } else {
        [b.clone(), a.clone()]
    }
}

/// Builds the certificate for `t` by recursing into whichever copy of `G_{r-1}`
/// the tree connects through both roots.
pub fn reflected_matching(rt: &ReflectedTree, t: &Graph) -> Result<WidthCertificate, CertificateError> {
    if rt.level() < 2 {
        return Err(CertificateError::InvalidLevel(rt.level()));
    }
    let g = rt.graph();
    if !is_spanning_tree(g, t) {
        return Err(CertificateError::NotSpanning);
    }
    let (matching, witness_edge) = recurse(rt, t)?;
    let rooted = RootedTree::new(t.clone(), 0)?;
    let cycles = matching
        .iter()
        .map(|[a, b]| {
            let e = edge(g.require(a).expect("matching lies in G"), g.require(b).expect("matching lies in G"));
            FundamentalCycle::from_tree(&rooted, e).vertices.iter().map(|&i| g.id(i).clone()).collect()
        })
        .collect();
    let hub = witness_edge[0].clone();
    Ok(WidthCertificate { level: rt.level(), tree: t.clone(), matching, hub, witness_edge, cycles })
}

/// `t` is a spanning tree of `rt.graph()` with the same identifiers.
fn recurse(rt: &ReflectedTree, t: &Graph) -> Result<(Vec<[VertexId; 2]>, [VertexId; 2]), CertificateError> {
    let g = rt.graph();
    let (u, v) = (rt.roots().first(), rt.roots().second());
    if rt.level() == 2 {
        let extra = non_tree_edges(g, t);
        let [e] = extra[..] else {
            return Err(CertificateError::StructureViolation(format!(
                "spanning tree of G_2 leaves {} non-tree edges",
                extra.len()
            )));
        };
        let rooted = RootedTree::new(t.clone(), 0)?;
        let cycle = FundamentalCycle::from_tree(&rooted, e);
        let p = rooted.path(g.require(u)?, g.require(v)?);
        let witness = p
            .windows(2)
            .map(|w| edge(w[0], w[1]))
            .filter(|pe| cycle.edges.contains(pe))
            .min()
            .ok_or_else(|| CertificateError::StructureViolation("cycle misses the u–v path".into()))?;
        return Ok((vec![pair(g.id(e.0), g.id(e.1))], pair(g.id(witness.0), g.id(witness.1))));
    }
    let copies = rt.copies().expect("level ≥ 2 has copies");
    let side = |c: &ReflectedTree| -> Result<Graph, GraphError> {
        t.induced_by_ids(c.graph().ids().iter().chain([u, v]))
    };
    let sides = [side(&copies[0])?, side(&copies[1])?];
    let connected = [is_connected(&sides[0]), is_connected(&sides[1])];
    let (inner, other) = match connected {
        [true, false] => (0, 1),
        [false, true] => (1, 0),
        _ => {
            return Err(CertificateError::StructureViolation(format!(
                "at level {} with prefix `{}`: connectivity of the two sides is {connected:?}",
                rt.level(),
                rt.prefix()
            )))
        }
    };
    let copy = &copies[inner];
    let sub = t.induced_by_ids(copy.graph().ids())?;
    if !is_spanning_tree(copy.graph(), &sub) {
        return Err(CertificateError::StructureViolation(format!(
            "T restricted to copy `{}` is not a spanning tree of it",
            copy.prefix()
        )));
    }
    let (mut matching, witness) = recurse(copy, &sub)?;

    // the disconnected side splits into the component of u and that of v
    let td_side = &sides[other];
    let comps = components(td_side);
    if comps.len() != 2 {
        return Err(CertificateError::StructureViolation(format!(
            "disconnected side has {} components",
            comps.len()
        )));
    }
    let mut comp_of = vec![0usize; td_side.vertex_count()];
    for &x in &comps[1] {
        comp_of[x] = 1;
    }
    let gd = g.induced_by_ids(td_side.ids())?;
    let crossing = gd
        .edges()
        .iter()
        .find(|&&(a, b)| comp_of[a] != comp_of[b] && !td_side.has_edge(a, b))
        .ok_or_else(|| CertificateError::StructureViolation("no edge joins the two components".into()))?;
    let e = pair(gd.id(crossing.0), gd.id(crossing.1));
    let used: BTreeSet<&VertexId> = matching.iter().flatten().collect();
    if e.iter().any(|x| used.contains(x)) {
        return Err(CertificateError::StructureViolation(format!("crossing edge {e:?} meets the matching")));
    }
    matching.push(e);
    Ok((matching, witness))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub valid: bool,
    pub reasons: Vec<String>,
}

/// Recomputes every certificate invariant from the graph and the stored tree.
pub fn verify_certificate(rt: &ReflectedTree, cert: &WidthCertificate) -> Verification {
    let mut reasons = Vec::new();
    let g = rt.graph();
    let t = &cert.tree;
    if cert.level != rt.level() {
        reasons.push(format!("certificate is for level {}, graph is level {}", cert.level, rt.level()));
    }
    if !is_spanning_tree(g, t) {
        reasons.push("tree is not a spanning tree".into());
        return Verification { valid: false, reasons };
    }
    let expected = rt.level().saturating_sub(1) as usize;
    if cert.matching.len() != expected {
        reasons.push(format!("matching has {} edges, expected {expected}", cert.matching.len()));
    }
    let mut seen = BTreeSet::new();
    let rooted = RootedTree::new(t.clone(), 0).expect("spanning tree");
    let (u, v) = (rt.roots().first(), rt.roots().second());
    let uv_path: BTreeSet<_> = tree_path(t, u, v)
        .expect("roots are vertices")
        .windows(2)
        .map(|w| pair(&w[0], &w[1]))
        .collect();
    let witness = pair(&cert.witness_edge[0], &cert.witness_edge[1]);
    if !uv_path.contains(&witness) {
        reasons.push(format!("witness edge {witness:?} is not on the u–v tree path"));
    }
    if cert.hub != witness[0] {
        reasons.push(format!("hub {} is not the smaller end of the witness edge", cert.hub));
    }
    if cert.cycles.len() != cert.matching.len() {
        reasons.push("one stored cycle per matching edge is required".into());
    }
    for (i, [a, b]) in cert.matching.iter().enumerate() {
        let (Some(ia), Some(ib)) = (g.index_of(a.as_str()), g.index_of(b.as_str())) else {
            reasons.push(format!("matching edge {a}{b} has unknown ends"));
            continue;
        };
        if !g.has_edge(ia, ib) {
            reasons.push(format!("{a}{b} is not an edge of the graph"));
            continue;
        }
        if t.has_edge(ia, ib) {
            reasons.push(format!("{a}{b} is a tree edge"));
            continue;
        }
        for x in [a, b] {
            if !seen.insert(x.clone()) {
                reasons.push(format!("vertex {x} is covered twice by the matching"));
            }
        }
        let cycle = FundamentalCycle::from_tree(&rooted, edge(ia, ib));
        let verts: BTreeSet<VertexId> = cycle.vertices.iter().map(|&j| g.id(j).clone()).collect();
        if cert.cycles.get(i) != Some(&verts) {
            reasons.push(format!("stored cycle of {a}{b} differs from the recomputed one"));
        }
        if !verts.contains(&cert.hub) {
            reasons.push(format!("hub {} is off the cycle of {a}{b}", cert.hub));
        }
        let on_cycle = cycle.edges.iter().any(|&(x, y)| pair(g.id(x), g.id(y)) == witness);
        if !on_cycle {
            reasons.push(format!("witness edge is off the cycle of {a}{b}"));
        }
    }
    Verification { valid: reasons.is_empty(), reasons }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BagBound {
    pub hub: VertexId,
    /// One endpoint per matching edge found in the hub bag (all distinct).
    pub forced: Vec<VertexId>,
    pub bag_size: usize,
}

/// The endpoints that any anchored decomposition on the certificate's tree must
/// place in the hub bag.
pub fn bag_lower_bound(
    rt: &ReflectedTree,
    cert: &WidthCertificate,
    td: &TreeDecomposition,
) -> Result<BagBound, CertificateError> {
    let check = verify_certificate(rt, cert);
    if !check.valid {
        return Err(CertificateError::HypothesisViolated(format!("certificate fails: {}", check.reasons.join("; "))));
    }
    if *td.host() != cert.tree {
        return Err(CertificateError::HypothesisViolated("decomposition is hosted on a different tree".into()));
    }
    let g = rt.graph();
    let report = validate(g, td)?;
    if !report.valid {
        return Err(CertificateError::HypothesisViolated(format!("decomposition is invalid: {report}")));
    }
    if !is_anchored(g, td)? {
        return Err(CertificateError::HypothesisViolated("decomposition is not anchored".into()));
    }
    let bag = td.bag_of(cert.hub.as_str()).expect("hub is a host node");
    let mut forced = Vec::with_capacity(cert.matching.len());
    for [a, b] in &cert.matching {
        if bag.contains(a) {
            forced.push(a.clone());
        } else if bag.contains(b) {
            forced.push(b.clone());
        } else {
            return Err(CertificateError::CounterexampleToLemma([a.clone(), b.clone()]));
        }
    }
    Ok(BagBound { hub: cert.hub.clone(), forced, bag_size: bag.len() })
}
