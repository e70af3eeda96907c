//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use tdforge::graph::{enumerate_induced_subtrees, is_connected};
use tdforge::search::treewidth_dp;
use tdforge::Graph;

/// Connected graphs on `n` vertices up to isomorphism, on vertices `a, b, c, …`.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let names: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let perms = permutations(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << pairs.len()) {
        let canon = perms
            .iter()
            .map(|p| {
                let mut m = 0u32;
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        let (x, y) = (p[a].min(p[b]), p[a].max(p[b]));
                        m |= 1 << pairs.iter().position(|&q| q == (x, y)).unwrap();
                    }
                }
                m
            })
            .min()
            .unwrap();
        if !seen.insert(canon) {
            continue;
        }
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| canon >> i & 1 == 1)
            .map(|(_, &(a, b))| (names[a].clone(), names[b].clone()));
        let g = Graph::new(names.clone(), edges).unwrap();
        if is_connected(&g) {
            out.push(g);
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum width over all subtree assignments hosted on `host`, by exhaustive
/// product search over induced subtrees (anchored: subtrees through `v`;
/// otherwise every connected node set). Values above `ceiling` are reported
/// as `ceiling + 1`.
pub fn naive_min_width(g: &Graph, host: &Graph, anchored: bool, ceiling: usize) -> usize {
    let n = g.vertex_count();
    assert!(n <= 16);
    let all: Vec<u32> = {
        let mut sets = Vec::new();
        for a in 0..n {
            for s in enumerate_induced_subtrees(host, a).unwrap() {
                if s[0] == a {
                    sets.push(s.iter().fold(0u32, |m, &x| m | 1 << x));
                }
            }
        }
        sets
    };
    let mut candidates: Vec<Vec<u32>> = (0..n)
        .map(|v| {
            if anchored {
                enumerate_induced_subtrees(host, v)
                    .unwrap()
                    .map(|s| s.iter().fold(0u32, |m, &x| m | 1 << x))
                    .collect()
            } else {
                all.clone()
            }
        })
        .collect();
    for c in &mut candidates {
        c.sort_by_key(|m| m.count_ones());
    }
    // visit vertices in BFS order so adjacency constraints prune early
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            for &w in g.neighbors(order[i]) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
            i += 1;
        }
    }
    let mut search = Product { g, cands: &candidates, order: &order, placed: vec![false; n], chosen: vec![0; n], load: vec![0; n] };
    // smallest feasible width first, from tw(g) since no decomposition goes below it;
    // loads of n are always reachable
    (treewidth_dp(g)..=ceiling).find(|&w| w + 1 >= n || search.feasible(0, w + 1)).unwrap_or(ceiling + 1)
}

struct Product<'a> {
    g: &'a Graph,
    cands: &'a [Vec<u32>],
    order: &'a [usize],
    placed: Vec<bool>,
    chosen: Vec<u32>,
    load: Vec<usize>,
}

impl Product<'_> {
    /// Is there a completion with every load at most `limit`?
    fn feasible(&mut self, i: usize, limit: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        let n = self.load.len();
        'next: for &s in &self.cands[v] {
            for &w in self.g.neighbors(v) {
                if self.placed[w] && self.chosen[w] & s == 0 {
                    continue 'next;
                }
            }
            if (0..n).any(|x| s >> x & 1 == 1 && self.load[x] + 1 > limit) {
                continue;
            }
            for x in 0..n {
                if s >> x & 1 == 1 {
                    self.load[x] += 1;
                }
            }
            self.chosen[v] = s;
            self.placed[v] = true;
            let found = self.feasible(i + 1, limit);
            self.placed[v] = false;
            for x in 0..n {
                if s >> x & 1 == 1 {
                    self.load[x] -= 1;
                }
            }
            if found {
                return true;
            }
        }
        false
    }
}
