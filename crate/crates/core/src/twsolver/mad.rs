//! Exact maximum average degree: `max 2|E(S)| / |S|` over nonempty vertex
//! subsets. Induced subgraphs suffice, since dropping edges from a fixed
//! vertex set never raises the ratio. Small graphs enumerate subsets
//! directly; larger ones run the classic densest-subgraph construction, a
//! discrete Newton iteration on exact rational guesses with an integral
//! min-cut test per round.

use crate::graph::Graph;
use num_rational::Rational64;
use num_traits::Zero;

const BRUTE_FORCE_LIMIT: usize = 20;

/// Exact maximum average degree. Panics on the empty graph.
pub fn max_average_degree(g: &Graph) -> Rational64 {
    assert!(
        g.vertex_count() > 0,
        "maximum average degree of the empty graph is undefined"
    );
    if g.vertex_count() <= BRUTE_FORCE_LIMIT {
        subset_bruteforce(g)
    } else {
        max_average_degree_flow(g)
    }
}

fn subset_bruteforce(g: &Graph) -> Rational64 {
    let n = g.vertex_count();
    let rows: Vec<u32> = (0..n)
        .map(|u| g.neighbors(u).fold(0u32, |acc, v| acc | 1 << v))
        .collect();
    let mut best = Rational64::zero();
    for mask in 1u32..(1 << n) {
        let mut twice_edges = 0i64;
        let mut size = 0i64;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            size += 1;
            twice_edges += (rows[v] & mask).count_ones() as i64;
        }
        let density = Rational64::new(twice_edges, size);
        if density > best {
            best = density;
        }
    }
    best
}

/// The scalable route: repeatedly tests "is there a subset strictly denser
/// than the current guess" via a min cut with integer capacities (the
/// rational guess `a/b` is cleared by scaling every capacity by `b`), and
/// jumps to the density of the extracted subset. Works for any size;
/// exposed separately so it can be cross-checked against the subset
/// enumeration.
pub fn max_average_degree_flow(g: &Graph) -> Rational64 {
    let n = g.vertex_count() as i64;
    assert!(n > 0);
    let m = g.edge_count() as i64;
    if m == 0 {
        return Rational64::zero();
    }
    // densities are |E(S)|/|S|; the result is twice the best one
    let mut guess = Rational64::new(m, n);
    loop {
        match denser_subset(g, guess) {
            None => return guess * 2,
            Some(subset) => {
                let (sub, _) = g.induced_subgraph(&subset);
                let improved = Rational64::new(sub.edge_count() as i64, subset.len() as i64);
                debug_assert!(improved > guess);
                guess = improved;
            }
        }
    }
}

/// Finds a nonempty `S` with `|E(S)|/|S| > guess`, if one exists.
///
/// Network: source -> v with capacity `m*b`, v -> sink with capacity
/// `m*b + 2a - b*deg(v)`, and `b` in both directions across each edge.
/// A cut keeping `S` on the source side costs `b*(mn - 2(|E(S)| - g|S|))`,
/// so the min cut drops below `m*n*b` exactly when a denser subset exists,
/// and the source side of the min cut is one.
fn denser_subset(g: &Graph, guess: Rational64) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let m = g.edge_count() as i64;
    let (a, b) = (*guess.numer(), *guess.denom());
    let source = n;
    let sink = n + 1;
    let mut net = Dinic::new(n + 2);
    for v in 0..n {
        net.add_edge(source, v, m * b);
        let back = m * b + 2 * a - b * g.degree(v) as i64;
        debug_assert!(back >= 0);
        net.add_edge(v, sink, back);
    }
    for e in g.edges() {
        net.add_edge(e.u(), e.v(), b);
        net.add_edge(e.v(), e.u(), b);
    }
    let flow = net.max_flow(source, sink);
    if flow >= m * n as i64 * b {
        return None;
    }
    let side = net.min_cut_source_side(source);
    let subset: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
    debug_assert!(!subset.is_empty());
    Some(subset)
}

struct Arc {
    to: usize,
    cap: i64,
}

struct Dinic {
    arcs: Vec<Arc>,
    head: Vec<Vec<usize>>,
    level: Vec<i32>,
    cursor: Vec<usize>,
}

impl Dinic {
    fn new(nodes: usize) -> Self {
        Dinic {
            arcs: Vec::new(),
            head: vec![Vec::new(); nodes],
            level: vec![-1; nodes],
            cursor: vec![0; nodes],
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: i64) {
        self.head[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.head[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.fill(-1);
        self.level[s] = 0;
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &i in &self.head[u] {
                let a = &self.arcs[i];
                if a.cap > 0 && self.level[a.to] < 0 {
                    self.level[a.to] = self.level[u] + 1;
                    queue.push_back(a.to);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.cursor[u] < self.head[u].len() {
            let i = self.head[u][self.cursor[u]];
            let (to, cap) = (self.arcs[i].to, self.arcs[i].cap);
            if cap > 0 && self.level[to] == self.level[u] + 1 {
                let got = self.dfs(to, t, pushed.min(cap));
                if got > 0 {
                    self.arcs[i].cap -= got;
                    self.arcs[i ^ 1].cap += got;
                    return got;
                }
            }
            self.cursor[u] += 1;
        }
        0
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.cursor.fill(0);
            loop {
                let got = self.dfs(s, t, i64::MAX);
                if got == 0 {
                    break;
                }
                flow += got;
            }
        }
        flow
    }

    /// Nodes reachable from `s` in the residual network.
    fn min_cut_source_side(&self, s: usize) -> Vec<bool> {
        let mut side = vec![false; self.head.len()];
        side[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &i in &self.head[u] {
                let a = &self.arcs[i];
                if a.cap > 0 && !side[a.to] {
                    side[a.to] = true;
                    stack.push(a.to);
                }
            }
        }
        side
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mad_examples() {
        assert_eq!(max_average_degree(&Graph::complete(4)), Rational64::from(3));
        assert_eq!(max_average_degree(&Graph::cycle(7)), Rational64::from(2));
        assert_eq!(
            max_average_degree(&Graph::cycle(7).square()),
            Rational64::from(4)
        );
    }

    #[test]
    fn dense_core_dominates() {
        // K4 with a long pendant path: the core decides the maximum
        let mut edges: Vec<(usize, usize)> = Graph::complete(4).edges().map(|e| e.endpoints()).collect();
        for i in 4..12 {
            edges.push((i - 1, i));
        }
        let g = Graph::from_edges(12, edges);
        assert_eq!(max_average_degree(&g), Rational64::from(3));
        assert_eq!(max_average_degree_flow(&g), Rational64::from(3));
    }

    #[test]
    fn flow_route_matches_enumeration() {
        // every graph on up to 6 vertices
        for n in 1..=6 {
            for g in crate::oracle::small_graphs(n) {
                assert_eq!(
                    max_average_degree_flow(&g),
                    subset_bruteforce(&g),
                    "disagreement on {g:?}"
                );
            }
        }
    }

    #[test]
    fn flow_route_on_a_large_cycle_square() {
        let g = Graph::cycle(60).square();
        assert_eq!(max_average_degree_flow(&g), Rational64::from(4));
    }

    #[test]
    fn edgeless_has_zero() {
        assert_eq!(max_average_degree(&Graph::new(3)), Rational64::zero());
    }

    #[test]
    #[should_panic]
    fn empty_graph_rejected() {
        max_average_degree(&Graph::new(0));
    }
}
