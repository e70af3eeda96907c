use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SearchError;
use crate::graph::{is_connected, Edge, Graph};

/// Streams every spanning tree of a connected graph exactly once, in a fixed order.
///
/// Branches on each edge in sorted order: include it when it joins two components
/// of the forest chosen so far, exclude it when it is not a bridge of the edges
/// still available. Both guards together leave no dead branches.
pub struct SpanningTrees {
    graph: Graph,
    /// Each frame: next edge to decide and the decision vector so far.
    stack: Vec<(usize, Vec<Decision>)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Decision {
    Open,
    In,
    Out,
}

pub fn enumerate_spanning_trees(g: &Graph) -> Result<SpanningTrees, SearchError> {
    if !is_connected(g) {
        return Err(SearchError::Disconnected);
    }
    Ok(SpanningTrees { graph: g.clone(), stack: vec![(0, vec![Decision::Open; g.edge_count()])] })
}

impl SpanningTrees {
    fn joins_components(&self, dec: &[Decision], e: Edge) -> bool {
        let mut dsu = Dsu::new(self.graph.vertex_count());
        for (i, &(a, b)) in self.graph.edges().iter().enumerate() {
            if dec[i] == Decision::In {
                dsu.union(a, b);
            }
        }
        dsu.find(e.0) != dsu.find(e.1)
    }

    /// Whether the graph of non-excluded edges stays connected without edge `skip`.
    fn connected_without(&self, dec: &[Decision], skip: usize) -> bool {
        let mut dsu = Dsu::new(self.graph.vertex_count());
        let mut parts = self.graph.vertex_count();
        for (i, &(a, b)) in self.graph.edges().iter().enumerate() {
            if i != skip && dec[i] != Decision::Out && dsu.union(a, b) {
                parts -= 1;
            }
        }
        parts == 1
    }
}

impl Iterator for SpanningTrees {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        let target = self.graph.vertex_count() - 1;
        while let Some((i, dec)) = self.stack.pop() {
            let chosen = dec.iter().filter(|d| **d == Decision::In).count();
            if chosen == target {
                let edges = self.graph.edges().iter().zip(&dec).filter(|(_, d)| **d == Decision::In).map(|(e, _)| *e);
                return Some(self.graph.spanning_subgraph(edges).expect("edges of the graph"));
            }
            let e = self.graph.edges()[i];
            // exclusion is pushed first so that inclusion is explored first
            if self.connected_without(&dec, i) {
                let mut out = dec.clone();
                out[i] = Decision::Out;
                self.stack.push((i + 1, out));
            }
            if self.joins_components(&dec, e) {
                let mut inc = dec;
                inc[i] = Decision::In;
                self.stack.push((i + 1, inc));
            }
        }
        None
    }
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Number of spanning trees via the matrix-tree theorem (integer Bareiss elimination).
pub fn count_spanning_trees(g: &Graph) -> Result<BigInt, SearchError> {
    count_spanning_trees_with(g, g.vertex_count() - 1, false)
}

/// Same count with a chosen deleted row/column and, optionally, the remaining
/// rows eliminated in reverse order. Used as an independent cross-check.
pub fn count_spanning_trees_with(g: &Graph, deleted: usize, reversed: bool) -> Result<BigInt, SearchError> {
    if !is_connected(g) {
        return Err(SearchError::Disconnected);
    }
    let n = g.vertex_count();
    if n == 1 {
        return Ok(BigInt::one());
    }
    let mut keep: Vec<usize> = (0..n).filter(|&i| i != deleted % n).collect();
    if reversed {
        keep.reverse();
    }
    let pos: Vec<Option<usize>> = {
        let mut p = vec![None; n];
        for (j, &v) in keep.iter().enumerate() {
            p[v] = Some(j);
        }
        p
    };
    let m = n - 1;
    let mut a = vec![vec![BigInt::zero(); m]; m];
    for (j, &v) in keep.iter().enumerate() {
        a[j][j] = BigInt::from(g.degree(v));
        for &w in g.neighbors(v) {
            if let Some(k) = pos[w] {
                a[j][k] -= 1;
            }
        }
    }
    Ok(bareiss_determinant(a))
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let m = a.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..m {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..m).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let det = sign * &a[m - 1][m - 1];
    debug_assert!(!det.is_negative());
    det
}

/// Uniform spanning trees by Wilson's algorithm (loop-erased random walks).
pub struct SpanningTreeSampler {
    graph: Graph,
    rng: ChaCha8Rng,
}

impl SpanningTreeSampler {
    pub fn new(g: &Graph, seed: u64) -> Result<Self, SearchError> {
        if !is_connected(g) {
            return Err(SearchError::Disconnected);
        }
        Ok(SpanningTreeSampler { graph: g.clone(), rng: ChaCha8Rng::seed_from_u64(seed) })
    }

    pub fn sample(&mut self) -> Graph {
        let g = &self.graph;
        let n = g.vertex_count();
        let mut in_tree = vec![false; n];
        let mut next = vec![usize::MAX; n];
        let root = self.rng.gen_range(0..n);
        in_tree[root] = true;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);
        for &start in &order {
            let mut u = start;
            while !in_tree[u] {
                let nb = g.neighbors(u);
                next[u] = nb[self.rng.gen_range(0..nb.len())];
                u = next[u];
            }
            let mut u = start;
            while !in_tree[u] {
                in_tree[u] = true;
                u = next[u];
            }
        }
        let edges = (0..n).filter(|&v| v != root).map(|v| crate::graph::edge(v, next[v]));
        g.spanning_subgraph(edges).expect("walk edges are graph edges")
    }
}

impl Iterator for SpanningTreeSampler {
    type Item = Graph;

    fn next(&mut self) -> Option<Graph> {
        Some(self.sample())
    }
}
