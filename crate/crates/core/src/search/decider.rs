use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::treewidth::treewidth_lower_bound;
use super::SearchError;
use crate::decomposition::TreeDecomposition;
use crate::graph::{is_spanning_tree, Edge, Graph, RootedTree, VertexId};

/// Largest host tree the decider accepts (node sets are 128-bit masks).
pub const MAX_HOST_NODES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Sat,
    Unsat,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeciderStats {
    pub nodes: u64,
    /// Wall clock; kept out of serialized output so results are reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeciderResult {
    pub status: Status,
    pub witness: Option<TreeDecomposition>,
    pub stats: DeciderStats,
}

impl DeciderResult {
    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

/// Decides whether `g` has a decomposition of width ≤ `budget` hosted on `host`
/// (a spanning tree of `g`), optionally anchored (`v ∈ T_v` for every `v`).
///
/// Every subtree is searched as the hull of a few chosen host nodes: one
/// meeting point per edge of `g` (plus `v` itself when anchored). Any valid
/// assignment contains such hulls, so restricting to them loses nothing. An edge
/// whose two subtrees already meet needs no point; otherwise the point may be
/// taken on the path bridging them. Edges are branched fail-first.
pub fn min_width_on_tree(g: &Graph, host: &Graph, budget: usize, anchored: bool) -> Result<DeciderResult, SearchError> {
    if !is_spanning_tree(g, host) {
        return Err(SearchError::HostNotSpanning);
    }
    let n = g.vertex_count();
    if n > MAX_HOST_NODES {
        return Err(SearchError::HostTooLarge { nodes: n, max: MAX_HOST_NODES });
    }
    let start = Instant::now();
    let mut stats = DeciderStats::default();
    // any decomposition on a tree is a tree decomposition, so its width is at least tw(g)
    if budget < treewidth_lower_bound(g) {
        stats.elapsed = start.elapsed();
        return Ok(DeciderResult { status: Status::Unsat, witness: None, stats });
    }
    let search = Search::new(g, host, budget);
    let mut state = State { sets: vec![0; n], load: vec![0; n] };
    if anchored {
        for v in 0..n {
            state.sets[v] = 1u128 << v;
            state.load[v] += 1;
        }
    }
    let pending: Vec<Edge> = g.edges().to_vec();
    let solved = search.solve(state, pending, &mut stats);
    stats.elapsed = start.elapsed();
    let witness = solved.map(|st| search.witness(st));
    Ok(DeciderResult {
        status: if witness.is_some() { Status::Sat } else { Status::Unsat },
        witness,
        stats,
    })
}

#[derive(Clone)]
struct State {
    sets: Vec<u128>,
    load: Vec<u8>,
}

struct Search<'a> {
    g: &'a Graph,
    host: &'a Graph,
    tree: RootedTree,
    cap: u8,
    /// Position of each vertex in the fixed order (descending degree, then name).
    rank: Vec<usize>,
}

/// A branching option for an unsatisfied edge: nodes gaining one unit of load
/// and the new masks for both ends.
struct Choice {
    add: Vec<(usize, u8)>,
    set_a: u128,
    set_b: u128,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, host: &'a Graph, budget: usize) -> Self {
        let n = g.vertex_count();
        let tree = RootedTree::new(host.clone(), 0).expect("host is a tree");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(g.id(a).cmp(g.id(b))));
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        let cap = budget.saturating_add(1).min(n.max(1)).min(u8::MAX as usize) as u8;
        Search { g, host, tree, cap, rank }
    }

    fn solve(&self, state: State, pending: Vec<Edge>, stats: &mut DeciderStats) -> Option<State> {
        stats.nodes += 1;
        let open: Vec<Edge> =
            pending.into_iter().filter(|&(a, b)| state.sets[a] & state.sets[b] == 0).collect();
        if open.is_empty() {
            return self.finish(state);
        }
        let mut best: Option<(usize, (usize, usize), Edge, Vec<Choice>)> = None;
        for &e in &open {
            let choices = self.choices(&state, e);
            if choices.is_empty() {
                return None;
            }
            let key = (self.rank[e.0].min(self.rank[e.1]), self.rank[e.0].max(self.rank[e.1]));
            let better = match &best {
                None => true,
                Some((count, bkey, _, _)) => (choices.len(), key) < (*count, *bkey),
            };
            if better {
                best = Some((choices.len(), key, e, choices));
            }
        }
        let (_, _, e, choices) = best.expect("open is non-empty");
        let rest: Vec<Edge> = open.into_iter().filter(|&f| f != e).collect();
        for c in choices {
            let mut next = state.clone();
            for &(x, d) in &c.add {
                next.load[x] += d;
            }
            next.sets[e.0] = c.set_a;
            next.sets[e.1] = c.set_b;
            if let Some(done) = self.solve(next, rest.clone(), stats) {
                return Some(done);
            }
        }
        None
    }

    /// Places a subtree for any vertex still without one (only possible without edges).
    fn finish(&self, mut state: State) -> Option<State> {
        for v in 0..state.sets.len() {
            if state.sets[v] == 0 {
                let x = (0..state.load.len()).min_by_key(|&x| state.load[x])?;
                if state.load[x] >= self.cap {
                    return None;
                }
                state.sets[v] = 1u128 << x;
                state.load[x] += 1;
            }
        }
        Some(state)
    }

    fn choices(&self, st: &State, (a, b): Edge) -> Vec<Choice> {
        let (sa, sb) = (st.sets[a], st.sets[b]);
        let cap = self.cap;
        let bit = |x: usize| 1u128 << x;
        match (sa == 0, sb == 0) {
            (true, true) => (0..st.load.len())
                .filter(|&x| st.load[x] + 2 <= cap)
                .map(|x| Choice { add: vec![(x, 2)], set_a: bit(x), set_b: bit(x) })
                .collect(),
            (true, false) => self.attach(st, sb).into_iter().map(|(add, x, grown)| Choice { add, set_a: x, set_b: grown }).collect(),
            (false, true) => self.attach(st, sa).into_iter().map(|(add, x, grown)| Choice { add, set_a: grown, set_b: x }).collect(),
            (false, false) => {
                let q = self.bridge(sa, sb);
                let l = q.len() - 1;
                if q[1..l].iter().any(|&x| st.load[x] >= cap) {
                    return Vec::new();
                }
                let mut out = Vec::new();
                for i in 0..=l {
                    let need = if i == 0 || i == l { 1 } else { 2 };
                    if st.load[q[i]] + need > cap {
                        continue;
                    }
                    let mut add: Vec<(usize, u8)> = q[1..l].iter().map(|&x| (x, 1)).collect();
                    add.push((q[i], 1));
                    // a keeps q_0..q_i, b keeps q_i..q_l
                    let grow_a = q[1..=i].iter().fold(0u128, |m, &x| m | bit(x));
                    let grow_b = q[i..l].iter().fold(0u128, |m, &x| m | bit(x));
                    out.push(Choice { add, set_a: sa | grow_a, set_b: sb | grow_b });
                }
                out
            }
        }
    }

    /// Options for giving an empty subtree its first node `x`: the other subtree
    /// `s` grows along the path towards `x`. Nodes outside `s` cannot be skipped
    /// here, since moving `x` into `s` would not shrink the empty side.
    fn attach(&self, st: &State, s: u128) -> Vec<(Vec<(usize, u8)>, u128, u128)> {
        let cap = self.cap;
        let mut out = Vec::new();
        for x in 0..st.load.len() {
            let bit = 1u128 << x;
            if s & bit != 0 {
                if st.load[x] < cap {
                    out.push((vec![(x, 1)], bit, s));
                }
                continue;
            }
            let q = self.bridge(bit, s);
            let l = q.len() - 1;
            // q_0 = x joins both subtrees, q_1..q_{l-1} join s
            if st.load[x] + 2 > cap || q[1..l].iter().any(|&y| st.load[y] >= cap) {
                continue;
            }
            let mut add: Vec<(usize, u8)> = q[1..l].iter().map(|&y| (y, 1)).collect();
            add.push((x, 2));
            let grown = q[..l].iter().fold(s, |m, &y| m | (1u128 << y));
            out.push((add, bit, grown));
        }
        out
    }

    /// Path `q_0 ∈ A, …, q_l ∈ B` joining two disjoint subtrees with interior outside both.
    fn bridge(&self, sa: u128, sb: u128) -> Vec<usize> {
        let a = sa.trailing_zeros() as usize;
        let b = sb.trailing_zeros() as usize;
        let path = self.tree.path(a, b);
        let first_b = path.iter().position(|&x| sb & (1u128 << x) != 0).expect("path ends in B");
        let last_a = path[..first_b].iter().rposition(|&x| sa & (1u128 << x) != 0).expect("path starts in A");
        path[last_a..=first_b].to_vec()
    }

    fn witness(&self, st: State) -> TreeDecomposition {
        let subtrees: BTreeMap<VertexId, BTreeSet<VertexId>> = (0..self.g.vertex_count())
            .map(|v| (self.g.id(v).clone(), members(st.sets[v]).map(|x| self.host.id(x).clone()).collect()))
            .collect();
        TreeDecomposition::from_subtrees(self.host.clone(), &subtrees).expect("hulls are subtrees of the host")
    }
}

fn members(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let x = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(x)
    })
}
