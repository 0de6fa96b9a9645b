//! Simple undirected graphs with dense vertex ids and the structural
//! primitives the rest of the crate builds on: squaring, BFS distances,
//! block/cut-vertex decomposition, true twins and exact average degree.

use num_rational::Rational64;
use std::collections::BTreeSet;
use std::fmt;

/// An undirected edge stored canonically with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    u: usize,
    v: usize,
}

impl Edge {
    /// Canonicalizes the endpoint order. Panics on self-loops.
    pub fn new(a: usize, b: usize) -> Self {
        assert!(a != b, "self-loop {a}-{b} is not a valid edge");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }

    /// The endpoint that is not `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            assert!(x == self.v, "vertex {x} is not an endpoint of {self}");
            self.u
        }
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.u, self.v)
    }
}

/// A finite simple undirected graph on vertices `0..n`.
///
/// Values are immutable after construction; every operation that "changes"
/// a graph builds a new one. Adjacency is kept as sorted sets, so all
/// iteration orders are deterministic.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
    m: usize,
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Panics on out-of-range endpoints
    /// or self-loops; duplicate edges are ignored.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![BTreeSet::new(); n];
        let mut m = 0;
        for (a, b) in edges {
            assert!(a < n && b < n, "edge {a}-{b} out of range for n={n}");
            assert!(a != b, "self-loop {a}-{b}");
            if adj[a].insert(b) {
                adj[b].insert(a);
                m += 1;
            }
        }
        Graph { adj, m }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete(n: usize) -> Self {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.adj.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.has_edge(e.u, e.v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Open neighborhood, ascending.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[u].iter().copied()
    }

    pub fn neighbor_set(&self, u: usize) -> &BTreeSet<usize> {
        &self.adj[u]
    }

    /// Closed neighborhood `N[u]` as a fresh set.
    pub fn closed_neighborhood(&self, u: usize) -> BTreeSet<usize> {
        let mut s = self.adj[u].clone();
        s.insert(u);
        s
    }

    /// Edges in canonical order (lexicographic on `(min, max)`).
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, nbrs)| {
            nbrs.iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| Edge { u, v })
        })
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    /// New graph with `extra` edges added (endpoints must already exist).
    pub fn with_edges(&self, extra: impl IntoIterator<Item = Edge>) -> Graph {
        let mut adj = self.adj.clone();
        let mut m = self.m;
        for e in extra {
            assert!(e.v < adj.len(), "edge {e} out of range");
            if adj[e.u].insert(e.v) {
                adj[e.v].insert(e.u);
                m += 1;
            }
        }
        Graph { adj, m }
    }

    /// New graph with the given edges removed; absent edges are ignored.
    pub fn without_edges<'a>(&self, gone: impl IntoIterator<Item = &'a Edge>) -> Graph {
        let mut adj = self.adj.clone();
        let mut m = self.m;
        for e in gone {
            if adj[e.u].remove(&e.v) {
                adj[e.v].remove(&e.u);
                m -= 1;
            }
        }
        Graph { adj, m }
    }

    /// The square: same vertices, an edge wherever `1 <= dist <= 2`.
    pub fn square(&self) -> Graph {
        let n = self.adj.len();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for u in 0..n {
            for &v in &self.adj[u] {
                adj[u].insert(v);
                for &w in &self.adj[v] {
                    if w != u {
                        adj[u].insert(w);
                    }
                }
            }
        }
        let m = adj.iter().map(|s| s.len()).sum::<usize>() / 2;
        Graph { adj, m }
    }

    /// BFS distance; `None` when `v` is unreachable from `u`.
    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        if u == v {
            return Some(0);
        }
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[u] = 0;
        let mut queue = std::collections::VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &self.adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    if y == v {
                        return Some(dist[y]);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Exact average degree `2m/n` as a rational. Panics on the empty graph.
    pub fn average_degree(&self) -> Rational64 {
        let n = self.adj.len();
        assert!(n > 0, "average degree of the empty graph is undefined");
        Rational64::new(2 * self.m as i64, n as i64)
    }

    /// True twins: equal closed neighborhoods (which forces `uv` to be an edge).
    pub fn are_true_twins(&self, u: usize, v: usize) -> bool {
        assert!(u != v, "twin test needs two distinct vertices");
        if !self.has_edge(u, v) {
            return false;
        }
        let mut nu = self.adj[u].clone();
        nu.remove(&v);
        let mut nv = self.adj[v].clone();
        nv.remove(&u);
        nu == nv
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.adj.len();
        let mut seen = vec![false; n];
        let mut comps = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &y in &self.adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        comp.push(y);
                        stack.push(y);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Subgraph induced by `verts` (which must be sorted and duplicate-free),
    /// relabeled to `0..verts.len()`. Returns the subgraph together with the
    /// map from new ids back to the originals.
    pub fn induced_subgraph(&self, verts: &[usize]) -> (Graph, Vec<usize>) {
        debug_assert!(verts.windows(2).all(|w| w[0] < w[1]));
        let mut back = vec![usize::MAX; self.adj.len()];
        for (i, &v) in verts.iter().enumerate() {
            back[v] = i;
        }
        let mut adj = vec![BTreeSet::new(); verts.len()];
        let mut m = 0;
        for (i, &v) in verts.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = back[w];
                if j != usize::MAX && adj[i].insert(j) && i < j {
                    m += 1;
                }
            }
        }
        // insert() counted each direction; m tracked once per u<v pair
        (Graph { adj, m }, verts.to_vec())
    }

    /// The decomposition into blocks, cut vertices and bridges.
    ///
    /// Isolated vertices form trivial single-vertex blocks, so every vertex
    /// lies in at least one block and every edge in exactly one.
    pub fn blocks_and_cuts(&self) -> BlockDecomposition {
        block_decomposition(self)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={}, edges=[", self.adj.len(), self.m)?;
        for (i, e) in self.edges().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "])")
    }
}

/// Blocks (maximal subgraphs without cut vertices), cut vertices and bridges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, each sorted; blocks ordered by
    /// (minimum vertex, full vertex list).
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: BTreeSet<usize>,
    pub bridges: BTreeSet<Edge>,
}

impl BlockDecomposition {
    /// Ids of the blocks containing `v`.
    pub fn blocks_of(&self, v: usize) -> Vec<usize> {
        (0..self.blocks.len())
            .filter(|&i| self.blocks[i].binary_search(&v).is_ok())
            .collect()
    }
}

/// Iterative Hopcroft–Tarjan biconnectivity. Edge stack variant: a block's
/// edges are popped when a root of a biconnected component is found.
fn block_decomposition(g: &Graph) -> BlockDecomposition {
    let n = g.vertex_count();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut block_vertex_sets: Vec<Vec<usize>> = Vec::new();
    let mut cut_vertices = BTreeSet::new();

    // Explicit DFS stack: (vertex, parent, neighbor iterator position).
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            disc[root] = timer;
            timer += 1;
            block_vertex_sets.push(vec![root]);
            continue;
        }
        let mut stack: Vec<(usize, usize, Vec<usize>, usize)> = Vec::new();
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        let mut root_children = 0;
        stack.push((root, usize::MAX, g.neighbors(root).collect(), 0));
        while !stack.is_empty() {
            let (u, parent, next) = {
                let top = stack.last_mut().unwrap();
                let (u, parent) = (top.0, top.1);
                if top.3 < top.2.len() {
                    let v = top.2[top.3];
                    top.3 += 1;
                    (u, parent, Some(v))
                } else {
                    (u, parent, None)
                }
            };
            match next {
                Some(v) if disc[v] == usize::MAX => {
                    edge_stack.push((u, v));
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((v, u, g.neighbors(v).collect(), 0));
                }
                Some(v) => {
                    if v != parent && disc[v] < disc[u] {
                        edge_stack.push((u, v));
                        low[u] = low[u].min(disc[v]);
                    }
                }
                None => {
                    stack.pop();
                    if let Some(top) = stack.last() {
                        let p = top.0;
                        low[p] = low[p].min(low[u]);
                        if low[u] >= disc[p] {
                            // the tree edge (p, u) closes a biconnected component
                            let mut verts = BTreeSet::new();
                            while let Some((a, b)) = edge_stack.pop() {
                                verts.insert(a);
                                verts.insert(b);
                                if (a, b) == (p, u) {
                                    break;
                                }
                            }
                            block_vertex_sets.push(verts.into_iter().collect());
                            if p != root || root_children > 1 {
                                cut_vertices.insert(p);
                            }
                        }
                    }
                }
            }
        }
    }

    block_vertex_sets.sort();
    let bridges = block_vertex_sets
        .iter()
        .filter(|b| b.len() == 2)
        .map(|b| Edge::new(b[0], b[1]))
        .collect();
    BlockDecomposition {
        blocks: block_vertex_sets,
        cut_vertices,
        bridges,
    }
}
