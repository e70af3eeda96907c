use std::collections::{BTreeSet, VecDeque};

use super::{edge, is_tree, Edge, Graph, GraphError, VertexId};

/// A tree with a distinguished root and parent pointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    graph: Graph,
    root: usize,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
}

impl RootedTree {
    pub fn new(graph: Graph, root: usize) -> Result<Self, GraphError> {
        if !is_tree(&graph) {
            return Err(GraphError::NotTree);
        }
        let n = graph.vertex_count();
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut seen = vec![false; n];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &y in graph.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    depth[y] = depth[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        Ok(RootedTree { graph, root, parent, depth })
    }

    pub fn with_root_id(graph: Graph, root: &VertexId) -> Result<Self, GraphError> {
        let r = graph.require(root)?;
        Self::new(graph, r)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn into_graph(self) -> Graph {
        self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn children(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.graph.neighbors(i).iter().copied().filter(move |&c| self.parent[c] == Some(i))
    }

    /// Length in edges of the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// The unique path from `a` to `b`, as an ordered index sequence.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let (mut x, mut y) = (a, b);
        let mut front = Vec::new();
        let mut back = Vec::new();
        while self.depth[x] > self.depth[y] {
            front.push(x);
            x = self.parent[x].expect("non-root has parent");
        }
        while self.depth[y] > self.depth[x] {
            back.push(y);
            y = self.parent[y].expect("non-root has parent");
        }
        while x != y {
            front.push(x);
            back.push(y);
            x = self.parent[x].expect("non-root has parent");
            y = self.parent[y].expect("non-root has parent");
        }
        front.push(x);
        front.extend(back.into_iter().rev());
        front
    }

    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.path(a, b).len() - 1
    }
}

/// The unique `a`–`b` path in the tree `t`.
pub fn tree_path(t: &Graph, a: &VertexId, b: &VertexId) -> Result<Vec<VertexId>, GraphError> {
    let ia = t.require(a)?;
    let ib = t.require(b)?;
    let rooted = RootedTree::new(t.clone(), ia)?;
    Ok(rooted.path(ia, ib).into_iter().map(|i| t.id(i).clone()).collect())
}

/// The cycle `C^e_T` closed by a non-tree edge `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalCycle {
    /// The closing edge.
    pub edge: Edge,
    /// Tree path from `edge.0` to `edge.1`.
    pub path: Vec<usize>,
    pub vertices: BTreeSet<usize>,
    /// Tree-path edges plus the closing edge, sorted.
    pub edges: BTreeSet<Edge>,
}

impl FundamentalCycle {
    pub fn from_tree(tree: &RootedTree, e: Edge) -> Self {
        let path = tree.path(e.0, e.1);
        let vertices = path.iter().copied().collect();
        let mut edges: BTreeSet<Edge> = path.windows(2).map(|w| edge(w[0], w[1])).collect();
        edges.insert(e);
        FundamentalCycle { edge: e, path, vertices, edges }
    }
}

/// Fundamental cycle of `e` with respect to the spanning tree `t` of `g`.
pub fn fundamental_cycle(
    g: &Graph,
    t: &Graph,
    e: (&VertexId, &VertexId),
) -> Result<FundamentalCycle, GraphError> {
    if !super::is_spanning_tree(g, t) {
        return Err(GraphError::NotSpanningTree);
    }
    let a = g.require(e.0)?;
    let b = g.require(e.1)?;
    if !g.has_edge(a, b) {
        return Err(GraphError::NotAnEdge(e.0.clone(), e.1.clone()));
    }
    if t.has_edge(a, b) {
        return Err(GraphError::TreeEdge(e.0.clone(), e.1.clone()));
    }
    let rooted = RootedTree::new(t.clone(), 0)?;
    Ok(FundamentalCycle::from_tree(&rooted, edge(a, b)))
}

/// Longest path length (in edges) of a tree, by double sweep.
pub fn tree_diameter(t: &Graph) -> Result<usize, GraphError> {
    let first = RootedTree::new(t.clone(), 0)?;
    let far = (0..t.vertex_count()).max_by_key(|&i| (first.depth(i), std::cmp::Reverse(i))).unwrap();
    let second = RootedTree::new(t.clone(), far)?;
    Ok(second.height())
}

/// Streams every vertex set `S ∋ anchor` with `t[S]` connected, each once.
///
/// Sets are yielded as sorted index vectors.
pub fn enumerate_induced_subtrees(t: &Graph, anchor: usize) -> Result<InducedSubtrees, GraphError> {
    let rooted = RootedTree::new(t.clone(), anchor)?;
    let children: Vec<Vec<usize>> =
        (0..t.vertex_count()).map(|i| rooted.children(i).collect()).collect();
    let start = Frame { chosen: vec![anchor], frontier: children[anchor].clone() };
    Ok(InducedSubtrees { children, stack: vec![start] })
}

#[derive(Debug)]
struct Frame {
    chosen: Vec<usize>,
    frontier: Vec<usize>,
}

/// Iterator returned by [`enumerate_induced_subtrees`].
///
/// Branches on the first frontier vertex: either it joins the set (and its
/// children join the frontier) or it and its whole subtree are excluded.
#[derive(Debug)]
pub struct InducedSubtrees {
    children: Vec<Vec<usize>>,
    stack: Vec<Frame>,
}

impl Iterator for InducedSubtrees {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        while let Some(Frame { chosen, mut frontier }) = self.stack.pop() {
            let Some(c) = frontier.pop() else {
                let mut out = chosen;
                out.sort_unstable();
                return Some(out);
            };
            let mut with = chosen.clone();
            with.push(c);
            let mut with_frontier = frontier.clone();
            with_frontier.extend_from_slice(&self.children[c]);
            self.stack.push(Frame { chosen, frontier });
            self.stack.push(Frame { chosen: with, frontier: with_frontier });
        }
        None
    }
}
