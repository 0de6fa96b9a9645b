//! Exact treewidth decision through elimination orderings.
//!
//! A graph has treewidth at most `k` iff some elimination order never
//! eliminates a vertex of current degree above `k` (eliminating connects
//! the remaining neighbors into a clique). The search runs per connected
//! component: a degeneracy lower bound and a greedy min-fill upper bound
//! first, then branch-and-bound over elimination orders memoized on the
//! eliminated set (the filled graph depends only on that set, not on the
//! order). Simplicial vertices of degree at most `k` are eliminated without
//! branching; a simplicial vertex of larger degree proves failure.

use super::TreeDecomposition;
use crate::graph::Graph;
use std::collections::HashSet;

const MEMO_CAP: usize = 1 << 21;

#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits {
    w: Vec<u64>,
}

impl Bits {
    fn new(n: usize) -> Self {
        Bits {
            w: vec![0; n.div_ceil(64)],
        }
    }

    fn set(&mut self, i: usize) {
        self.w[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.w[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.w[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.w.iter().map(|x| x.count_ones() as usize).sum()
    }

    fn and_count(&self, other: &Bits) -> usize {
        self.w
            .iter()
            .zip(&other.w)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn ones(&self, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.get(i)).collect()
    }

    fn and_ones(&self, other: &Bits, n: usize) -> Vec<usize> {
        (0..n).filter(|&i| self.get(i) && other.get(i)).collect()
    }
}

struct Elim {
    n: usize,
    adj: Vec<Bits>,
    active: Bits,
    memo: HashSet<Bits>,
}

impl Elim {
    fn degree(&self, v: usize) -> usize {
        self.adj[v].and_count(&self.active)
    }

    fn is_simplicial(&self, v: usize) -> bool {
        let nbrs = self.adj[v].and_ones(&self.active, self.n);
        nbrs.iter().enumerate().all(|(i, &a)| {
            nbrs[i + 1..].iter().all(|&b| self.adj[a].get(b))
        })
    }

    /// Eliminates `v`: connects its remaining neighbors, deactivates it.
    /// Returns the fill edges for undoing.
    fn eliminate(&mut self, v: usize) -> Vec<(usize, usize)> {
        let nbrs = self.adj[v].and_ones(&self.active, self.n);
        let mut fill = Vec::new();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                if !self.adj[a].get(b) {
                    self.adj[a].set(b);
                    self.adj[b].set(a);
                    fill.push((a, b));
                }
            }
        }
        self.active.clear(v);
        fill
    }

    fn undo(&mut self, v: usize, fill: Vec<(usize, usize)>) {
        self.active.set(v);
        for (a, b) in fill {
            self.adj[a].clear(b);
            self.adj[b].clear(a);
        }
    }

    fn search(&mut self, k: usize, order: &mut Vec<usize>) -> bool {
        let cnt = self.active.count();
        if cnt <= k + 1 {
            order.extend(self.active.ones(self.n));
            return true;
        }
        // simplicial vertices settle without branching
        for v in 0..self.n {
            if !self.active.get(v) || !self.is_simplicial(v) {
                continue;
            }
            if self.degree(v) > k {
                return false; // a clique larger than k+1
            }
            let fill = self.eliminate(v);
            debug_assert!(fill.is_empty());
            order.push(v);
            let ok = self.search(k, order);
            if !ok {
                order.pop();
                self.undo(v, fill);
            }
            return ok;
        }
        if self.memo.contains(&self.active) {
            return false;
        }
        let mut cands: Vec<(usize, usize)> = (0..self.n)
            .filter(|&v| self.active.get(v))
            .map(|v| (self.degree(v), v))
            .filter(|&(d, _)| d <= k)
            .collect();
        cands.sort_unstable();
        for (_, v) in cands {
            let fill = self.eliminate(v);
            order.push(v);
            if self.search(k, order) {
                return true;
            }
            order.pop();
            self.undo(v, fill);
        }
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(self.active.clone());
        }
        false
    }
}

/// Max over the peeling sequence of the minimum degree; a lower bound for
/// treewidth, cheap enough to run first.
fn degeneracy(g: &Graph) -> usize {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut best = 0;
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !gone[v])
            .min_by_key(|&v| deg[v])
            .unwrap();
        best = best.max(deg[v]);
        gone[v] = true;
        for w in g.neighbors(v) {
            if !gone[w] {
                deg[w] -= 1;
            }
        }
    }
    best
}

/// Greedy minimum-fill order; succeeds when its elimination degrees stay
/// within `k`.
fn greedy_order(elim: &mut Elim, k: usize) -> Option<Vec<usize>> {
    let mut order = Vec::with_capacity(elim.n);
    let mut undo_stack = Vec::new();
    let mut ok = true;
    for _ in 0..elim.n {
        let mut best: Option<(usize, usize, usize)> = None; // (fill, deg, v)
        for v in 0..elim.n {
            if !elim.active.get(v) {
                continue;
            }
            let nbrs = elim.adj[v].and_ones(&elim.active, elim.n);
            let mut fill = 0;
            for (i, &a) in nbrs.iter().enumerate() {
                for &b in &nbrs[i + 1..] {
                    if !elim.adj[a].get(b) {
                        fill += 1;
                    }
                }
            }
            let key = (fill, nbrs.len(), v);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let (_, deg, v) = best.unwrap();
        if deg > k {
            ok = false;
            break;
        }
        undo_stack.push((v, elim.eliminate(v)));
        order.push(v);
    }
    while let Some((v, fill)) = undo_stack.pop() {
        elim.undo(v, fill);
    }
    if ok {
        Some(order)
    } else {
        None
    }
}

fn component_order(sub: &Graph, k: usize) -> Option<Vec<usize>> {
    let c = sub.vertex_count();
    if c <= k + 1 {
        return Some((0..c).collect());
    }
    if degeneracy(sub) > k {
        return None;
    }
    let mut elim = Elim {
        n: c,
        adj: (0..c)
            .map(|v| {
                let mut b = Bits::new(c);
                for w in sub.neighbors(v) {
                    b.set(w);
                }
                b
            })
            .collect(),
        active: {
            let mut b = Bits::new(c);
            for v in 0..c {
                b.set(v);
            }
            b
        },
        memo: HashSet::new(),
    };
    if let Some(order) = greedy_order(&mut elim, k) {
        return Some(order);
    }
    let mut order = Vec::with_capacity(c);
    if elim.search(k, &mut order) {
        Some(order)
    } else {
        None
    }
}

/// Bags and tree edges from an elimination order: each vertex forms a bag
/// with its neighbors at elimination time, hooked onto the bag of the
/// earliest-eliminated of those neighbors.
fn decomposition_from_order(sub: &Graph, order: &[usize]) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let c = sub.vertex_count();
    let mut pos = vec![0; c];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut adj: Vec<HashSet<usize>> = (0..c).map(|v| sub.neighbors(v).collect()).collect();
    let mut active = vec![true; c];
    let mut bags = Vec::with_capacity(c);
    let mut edges = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let nbrs: Vec<usize> = {
            let mut ns: Vec<usize> = adj[v].iter().copied().filter(|&w| active[w]).collect();
            ns.sort_unstable();
            ns
        };
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        if let Some(&parent) = nbrs.iter().min_by_key(|&&w| pos[w]) {
            edges.push((i, pos[parent]));
        }
        for (ai, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[ai + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        active[v] = false;
    }
    (bags, edges)
}

/// Exact decision: a width-`k` (or better) tree decomposition, or `None`
/// proving the treewidth exceeds `k`. Complete for any input; the search
/// is exponential in the worst case but the preprocessing handles the
/// sparse residues this crate feeds it.
pub fn treewidth_at_most(g: &Graph, k: usize) -> Option<TreeDecomposition> {
    if g.vertex_count() == 0 {
        return Some(TreeDecomposition {
            bags: vec![Vec::new()],
            tree_edges: Vec::new(),
        });
    }
    let mut bags: Vec<Vec<usize>> = Vec::new();
    let mut tree_edges: Vec<(usize, usize)> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for comp in g.connected_components() {
        let (sub, map) = g.induced_subgraph(&comp);
        let order = component_order(&sub, k)?;
        let (cbags, cedges) = decomposition_from_order(&sub, &order);
        let base = bags.len();
        roots.push(base + cbags.len() - 1);
        bags.extend(cbags.into_iter().map(|bag| {
            let mut global: Vec<usize> = bag.into_iter().map(|v| map[v]).collect();
            global.sort_unstable();
            global
        }));
        tree_edges.extend(cedges.into_iter().map(|(a, b)| (base + a, base + b)));
    }
    for pair in roots.windows(2) {
        tree_edges.push((pair[0], pair[1]));
    }
    Some(TreeDecomposition { bags, tree_edges })
}
