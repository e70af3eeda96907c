//! Seeded random instances for property tests and experiments.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng;

use crate::constructions::{attach_gadgets, toy_schedule, GadgetInstance};
use crate::decomposition::{validate, TreeDecomposition};
use crate::graph::{components, edge, is_connected, Edge, Graph, RootedTree, VertexId};
use crate::search::SpanningTreeSampler;
use crate::transforms::MinorModel;

fn padded(prefix: &str, n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|i| format!("{prefix}{i:0width$}")).collect()
}

/// Random connected graph on `n` vertices `v0, v1, …`: a random recursive tree
/// plus each remaining pair independently with probability `p`.
pub fn random_connected_graph(n: usize, p: f64, rng: &mut impl Rng) -> Graph {
    let ids = padded("v", n);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.insert(edge(order[i], order[j]));
    }
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.insert((a, b));
            }
        }
    }
    Graph::new(ids.clone(), edges.into_iter().map(|(a, b)| (ids[a].clone(), ids[b].clone())))
        .expect("simple graph")
}

/// Uniform spanning tree of a connected graph.
pub fn random_spanning_tree(g: &Graph, rng: &mut impl Rng) -> Graph {
    SpanningTreeSampler::new(g, rng.gen()).expect("connected graph").sample()
}

/// Random valid decomposition of `g` hosted on the tree `host`.
///
/// Each vertex gets a random anchor node and each edge a random meeting node;
/// `T_v` is the smallest subtree containing the anchor of `v` and the meeting
/// nodes of its edges.
pub fn random_decomposition(g: &Graph, host: &Graph, rng: &mut impl Rng) -> TreeDecomposition {
    let tree = RootedTree::new(host.clone(), 0).expect("host is a tree");
    let m = host.vertex_count();
    let mut points: Vec<Vec<usize>> = (0..g.vertex_count()).map(|_| vec![rng.gen_range(0..m)]).collect();
    for &(a, b) in g.edges() {
        let x = rng.gen_range(0..m);
        points[a].push(x);
        points[b].push(x);
    }
    let mut bags = vec![BTreeSet::new(); m];
    for (v, pts) in points.iter().enumerate() {
        for x in hull(&tree, pts) {
            bags[x].insert(g.id(v).clone());
        }
    }
    TreeDecomposition::from_indexed(host.clone(), bags)
}

/// Smallest subtree containing `points`.
fn hull(tree: &RootedTree, points: &[usize]) -> BTreeSet<usize> {
    let mut out = BTreeSet::from([points[0]]);
    for &p in &points[1..] {
        if out.contains(&p) {
            continue;
        }
        // walk from p towards points[0] until the current hull is reached
        for x in tree.path(p, points[0]) {
            if !out.insert(x) {
                break;
            }
        }
    }
    out
}

/// Random valid minor model of a tree in `g`, with the pattern tree on `x0, x1, …`.
///
/// Cuts a random spanning tree of `g` at roughly a `cut` fraction of its edges;
/// the pieces are the branch sets and the cut edges connect them. With
/// `partial`, branch sets then shed random leaves not used by a connecting edge.
pub fn random_minor_model(g: &Graph, cut: f64, partial: bool, rng: &mut impl Rng) -> MinorModel {
    let t = random_spanning_tree(g, rng);
    let (cut_edges, kept): (Vec<Edge>, Vec<Edge>) = t.edges().iter().partition(|_| rng.gen_bool(cut));
    let forest = t.spanning_subgraph(kept).expect("tree edges");
    let pieces = components(&forest);
    let names = padded("x", pieces.len());
    let mut piece_of = vec![0; g.vertex_count()];
    for (i, piece) in pieces.iter().enumerate() {
        for &v in piece {
            piece_of[v] = i;
        }
    }
    let mut sets: Vec<BTreeSet<usize>> = pieces.iter().map(|p| p.iter().copied().collect()).collect();
    if partial {
        let pinned: BTreeSet<usize> = cut_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        for set in &mut sets {
            for _ in 0..rng.gen_range(0..=set.len()) {
                let leaves: Vec<usize> = set
                    .iter()
                    .copied()
                    .filter(|&v| {
                        !pinned.contains(&v)
                            && set.len() > 1
                            && forest.neighbors(v).iter().filter(|w| set.contains(w)).count() <= 1
                    })
                    .collect();
                let Some(&v) = leaves.choose(rng) else { break };
                set.remove(&v);
            }
        }
    }
    let pattern = Graph::new(
        names.clone(),
        cut_edges.iter().map(|&(a, b)| (names[piece_of[a]].clone(), names[piece_of[b]].clone())),
    )
    .expect("pieces of a tree form a tree");
    let branch: BTreeMap<VertexId, BTreeSet<VertexId>> = sets
        .iter()
        .enumerate()
        .map(|(i, s)| (VertexId::from(&names[i]), s.iter().map(|&v| g.id(v).clone()).collect()))
        .collect();
    let map = cut_edges
        .iter()
        .map(|&(a, b)| {
            (
                (VertexId::from(&names[piece_of[a]]), VertexId::from(&names[piece_of[b]])),
                (g.id(a).clone(), g.id(b).clone()),
            )
        })
        .collect();
    MinorModel::new(g.clone(), pattern, &branch, &map).expect("identifiers are known")
}

/// Random toy gadget instance on a random connected base graph with at most
/// `max_base` vertices, keeping `|V(G̃)| ≤ max_total`.
pub fn random_toy_instance(k: u64, max_base: usize, max_total: usize, rng: &mut impl Rng) -> GadgetInstance {
    loop {
        let n = rng.gen_range(1..=max_base);
        let base = random_connected_graph(n, 0.4, rng);
        let heights: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let widths: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let size: u64 = n as u64
            + heights.iter().zip(&widths).map(|(&h, &w)| (1..=h).map(|i| w.pow(i as u32)).sum::<u64>()).sum::<u64>();
        if size > max_total as u64 {
            continue;
        }
        let mut ordering: Vec<VertexId> = base.ids().to_vec();
        ordering.shuffle(rng);
        let schedule = toy_schedule(k, n, &heights, &widths).expect("valid toy parameters");
        return attach_gadgets(&base, &ordering, &schedule, max_total as u64).expect("within cap");
    }
}

/// Random valid decomposition of width ≤ `k` of the canonical path on `n` vertices.
///
/// Starts from sliding windows and applies random width-preserving moves: new
/// leaves with sub-bags, growing a bag from a neighbour, merging adjacent bags,
/// subdividing an edge with the intersection, and dropping a vertex when the
/// result stays valid.
pub fn random_path_decomposition(n: usize, k: usize, moves: usize, rng: &mut impl Rng) -> TreeDecomposition {
    let g = Graph::path(n).expect("n ≥ 1");
    let ids = g.ids().to_vec();
    let mut next_id = 0usize;
    let mut fresh = || {
        next_id += 1;
        next_id - 1
    };
    // nodes keyed by a counter; edges as pairs of counters
    let mut bags: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    let span = rng.gen_range(1..=k.max(1)).min(n.saturating_sub(1)).max(usize::from(n > 1));
    let mut prev: Option<usize> = None;
    let mut start = 0;
    loop {
        let id = fresh();
        bags.insert(id, (start..(start + span + 1).min(n)).collect());
        adj.insert(id, BTreeSet::new());
        if let Some(p) = prev {
            adj.get_mut(&p).unwrap().insert(id);
            adj.get_mut(&id).unwrap().insert(p);
        }
        prev = Some(id);
        if start + span + 1 >= n {
            break;
        }
        start += 1;
    }
    let cap = k + 1;
    for _ in 0..moves {
        let x = *bags.keys().choose(rng).unwrap();
        match rng.gen_range(0..5) {
            0 => {
                let sub: BTreeSet<usize> = bags[&x].iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
                let y = fresh();
                bags.insert(y, sub);
                adj.insert(y, BTreeSet::from([x]));
                adj.get_mut(&x).unwrap().insert(y);
            }
            1 => {
                let Some(&y) = adj[&x].iter().choose(rng) else { continue };
                let Some(&v) = bags[&y].iter().choose(rng) else { continue };
                if bags[&x].len() < cap {
                    bags.get_mut(&x).unwrap().insert(v);
                }
            }
            2 => {
                let Some(&y) = adj[&x].iter().choose(rng) else { continue };
                let union: BTreeSet<usize> = bags[&x].union(&bags[&y]).copied().collect();
                if union.len() > cap {
                    continue;
                }
                bags.insert(x, union);
                bags.remove(&y);
                let ny = adj.remove(&y).unwrap();
                for z in ny {
                    let nz = adj.get_mut(&z).unwrap();
                    nz.remove(&y);
                    if z != x {
                        nz.insert(x);
                        adj.get_mut(&x).unwrap().insert(z);
                    }
                }
            }
            3 => {
                let Some(&y) = adj[&x].iter().choose(rng) else { continue };
                let mid = fresh();
                bags.insert(mid, bags[&x].intersection(&bags[&y]).copied().collect());
                adj.get_mut(&x).unwrap().remove(&y);
                adj.get_mut(&y).unwrap().remove(&x);
                adj.insert(mid, BTreeSet::from([x, y]));
                adj.get_mut(&x).unwrap().insert(mid);
                adj.get_mut(&y).unwrap().insert(mid);
            }
            _ => {
                let Some(&v) = bags[&x].iter().choose(rng) else { continue };
                bags.get_mut(&x).unwrap().remove(&v);
                if !validate(&g, &assemble(&ids, &bags, &adj)).expect("path vertices").valid {
                    bags.get_mut(&x).unwrap().insert(v);
                }
            }
        }
    }
    let td = assemble(&ids, &bags, &adj);
    debug_assert!(validate(&g, &td).unwrap().valid && td.width() <= k as i64);
    td
}

fn assemble(
    ids: &[VertexId],
    bags: &BTreeMap<usize, BTreeSet<usize>>,
    adj: &BTreeMap<usize, BTreeSet<usize>>,
) -> TreeDecomposition {
    let names: BTreeMap<usize, String> = {
        let width = bags.keys().last().map_or(1, |m| m.to_string().len());
        bags.keys().map(|&x| (x, format!("t{x:0width$}"))).collect()
    };
    let edges = adj.iter().flat_map(|(&x, ys)| ys.iter().filter(move |&&y| x < y).map(move |&y| (x, y)));
    let host = Graph::new(names.values().cloned(), edges.map(|(x, y)| (names[&x].clone(), names[&y].clone())))
        .expect("forest on fresh names");
    debug_assert!(is_connected(&host));
    let bag_map = bags
        .iter()
        .map(|(x, b)| (VertexId::from(&names[x]), b.iter().map(|&v| ids[v].clone()).collect()))
        .collect();
    TreeDecomposition::new(host, bag_map).expect("host nodes are known")
}
