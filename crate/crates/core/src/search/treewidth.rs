use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::graph::Graph;

pub const DEFAULT_TREEWIDTH_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreewidthMethod {
    /// Subset dynamic programming over elimination orderings.
    Exact,
    /// Reduction rules deciding treewidth ≤ 2.
    SeriesParallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Treewidth {
    pub value: usize,
    pub method: TreewidthMethod,
}

/// Exact treewidth: the subset DP up to `cap` vertices, the series-parallel
/// recognizer above it (which can only certify values ≤ 2).
pub fn exact_treewidth(g: &Graph, cap: usize) -> Result<Treewidth, SearchError> {
    if g.vertex_count() <= cap {
        return Ok(Treewidth { value: treewidth_dp(g), method: TreewidthMethod::Exact });
    }
    match treewidth_at_most_two(g) {
        Some(value) => Ok(Treewidth { value, method: TreewidthMethod::SeriesParallel }),
        None => Err(SearchError::Inconclusive(format!(
            "{} vertices exceed the exact cap {cap} and the treewidth is at least 3",
            g.vertex_count()
        ))),
    }
}

/// `TW(S) = min_{v ∈ S} max(TW(S∖v), |Q(S∖v, v)|)`, where `Q(S, v)` is the set of
/// vertices outside `S ∪ {v}` reachable from `v` through `S`. Limited to 30 vertices.
pub fn treewidth_dp(g: &Graph) -> usize {
    let n = g.vertex_count();
    assert!(n <= 30, "subset DP limited to 30 vertices");
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect();
    let full: u32 = (1u32 << n) - 1;
    let q = |s: u32, v: usize| -> u32 {
        // vertices outside s ∪ {v} adjacent to the component of v in G[s ∪ {v}]
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut out = 0u32;
        while let Some(x) = stack.pop() {
            let nb = adj[x];
            out |= nb & !s & !(1u32 << v);
            let mut inner = nb & s & !seen;
            seen |= inner;
            while inner != 0 {
                let y = inner.trailing_zeros() as usize;
                inner &= inner - 1;
                stack.push(y);
            }
        }
        out
    };
    let mut tw = vec![usize::MAX; 1usize << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1u32 << v);
            let cand = tw[without as usize].max(q(without, v).count_ones() as usize);
            best = best.min(cand);
        }
        tw[s as usize] = best;
    }
    tw[full as usize]
}

/// Treewidth when it is at most two, else `None`.
///
/// Repeatedly deletes vertices of degree ≤ 1 and suppresses vertices of degree 2
/// (joining their neighbours, merging parallel edges); the graph has treewidth
/// ≤ 2 iff this empties it.
pub fn treewidth_at_most_two(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; n];
    let mut queue: Vec<usize> = (0..n).collect();
    while let Some(v) = queue.pop() {
        if !alive[v] || adj[v].len() > 2 {
            continue;
        }
        alive[v] = false;
        let nb: Vec<usize> = std::mem::take(&mut adj[v]).into_iter().collect();
        for &w in &nb {
            adj[w].remove(&v);
        }
        if let [a, b] = nb[..] {
            adj[a].insert(b);
            adj[b].insert(a);
        }
        queue.extend(nb);
    }
    if alive.iter().any(|&a| a) {
        return None;
    }
    Some(if g.edge_count() == 0 {
        0
    } else if crate::graph::components(g).len() + g.edge_count() == n {
        1
    } else {
        2
    })
}

/// Minor-min-width: the largest minimum degree seen while contracting a
/// minimum-degree vertex into its minimum-degree neighbour. Every minor has
/// treewidth at most tw(G) and minimum degree at most its treewidth, so this never
/// exceeds tw(G).
pub fn treewidth_lower_bound(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut adj: Vec<BTreeSet<usize>> = (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive: BTreeSet<usize> = (0..n).collect();
    let mut bound = 0;
    while alive.len() > 1 {
        let v = *alive.iter().min_by_key(|&&v| (adj[v].len(), v)).expect("non-empty");
        bound = bound.max(adj[v].len());
        alive.remove(&v);
        let nb = std::mem::take(&mut adj[v]);
        for &w in &nb {
            adj[w].remove(&v);
        }
        if let Some(&u) = nb.iter().min_by_key(|&&u| (adj[u].len(), u)) {
            for &w in &nb {
                if w != u {
                    adj[u].insert(w);
                    adj[w].insert(u);
                }
            }
        }
    }
    bound
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let ids: Vec<String> = (0..n).map(|i| format!("k{i}")).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((ids[i].clone(), ids[j].clone()));
            }
        }
        Graph::new(ids, edges).unwrap()
    }

    fn grid(r: usize, c: usize) -> Graph {
        let id = |i: usize, j: usize| format!("g{i}_{j}");
        let mut v = Vec::new();
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                v.push(id(i, j));
                if i + 1 < r {
                    e.push((id(i, j), id(i + 1, j)));
                }
                if j + 1 < c {
                    e.push((id(i, j), id(i, j + 1)));
                }
            }
        }
        Graph::new(v, e).unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(treewidth_dp(&Graph::path(6).unwrap()), 1);
        assert_eq!(treewidth_dp(&Graph::path(1).unwrap()), 0);
        for n in 2..=7 {
            assert_eq!(treewidth_dp(&complete(n)), n - 1);
        }
        assert_eq!(treewidth_dp(&grid(3, 3)), 3);
        assert_eq!(treewidth_dp(&grid(3, 4)), 3);
        assert_eq!(treewidth_dp(&grid(4, 4)), 4);
    }

    #[test]
    fn recognizer_agrees_with_dp_below_three() {
        let c4 = Graph::new(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]).unwrap();
        assert_eq!(treewidth_at_most_two(&c4), Some(2));
        assert_eq!(treewidth_at_most_two(&complete(4)), None);
        assert_eq!(treewidth_at_most_two(&Graph::path(7).unwrap()), Some(1));
        assert_eq!(treewidth_at_most_two(&grid(2, 6)), Some(2));
        assert_eq!(treewidth_at_most_two(&grid(3, 3)), None);
        let empty = Graph::new(["a", "b"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(treewidth_at_most_two(&empty), Some(0));
    }

    #[test]
    fn dispatch_by_size() {
        let big = grid(2, 10);
        assert_eq!(
            exact_treewidth(&big, 14).unwrap(),
            Treewidth { value: 2, method: TreewidthMethod::SeriesParallel }
        );
        assert_eq!(exact_treewidth(&big, 20).unwrap().method, TreewidthMethod::Exact);
        assert!(exact_treewidth(&grid(4, 4), 10).is_err());
    }

    #[test]
    fn lower_bound_is_sound() {
        for n in 1..=7 {
            assert_eq!(treewidth_lower_bound(&complete(n)), n - 1);
        }
        assert_eq!(treewidth_lower_bound(&Graph::path(5).unwrap()), 1);
        for (r, c) in [(2, 5), (3, 3), (3, 4), (4, 4)] {
            let g = grid(r, c);
            assert!(treewidth_lower_bound(&g) <= treewidth_dp(&g));
            assert!(treewidth_lower_bound(&g) >= 2);
        }
    }
}
