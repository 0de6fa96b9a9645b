//! Test-only oracles, independent of the library's implementation paths:
//! exhaustive subset enumeration for roots, a Kuratowski-subdivision
//! planarity test for small graphs, and the labeled-instance sampler the
//! acceptance suite runs on.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sqroot::{Edge, Graph, LabeledInstance};
use std::collections::BTreeSet;

/// Every root of `g` by checking the square of all 2^m edge subsets.
/// Only sensible for small m; the independent ground truth for the
/// propagation-based solver and enumerator.
pub fn naive_roots(g: &Graph) -> Vec<Graph> {
    let edges: Vec<Edge> = g.edges().collect();
    assert!(edges.len() <= 16, "naive enumeration is capped at 16 edges");
    let mut out = Vec::new();
    for mask in 0u32..(1 << edges.len()) {
        let chosen = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| e.endpoints());
        let h = Graph::from_edges(g.vertex_count(), chosen);
        if h.square() == *g {
            out.push(h);
        }
    }
    out
}

/// Naive labeled decision: does any root contain all of `forced` and none
/// of `forbidden`?
pub fn naive_labeled_solvable(inst: &LabeledInstance) -> bool {
    naive_roots(&inst.graph).into_iter().any(|h| {
        inst.forced.iter().all(|e| h.contains(*e))
            && inst.forbidden.iter().all(|e| !h.contains(*e))
    })
}

// ---------------------------------------------------------------------------
// planarity by exhaustive Kuratowski-subdivision search
// ---------------------------------------------------------------------------

/// Exact planarity for small graphs: the Euler bound as a prefilter, then
/// a search for a subdivision of K5 or K3,3.
pub fn is_planar(g: &Graph) -> bool {
    let n = g.vertex_count();
    let m = g.edge_count();
    if n <= 4 || m < 9 {
        return true; // the smallest non-planar graphs have 9 edges
    }
    if m > 3 * n - 6 {
        return false;
    }
    assert!(n <= 12, "the subdivision search is sized for small graphs");
    !has_k5_subdivision(g) && !has_k33_subdivision(g)
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

fn has_k5_subdivision(g: &Graph) -> bool {
    let cands: Vec<usize> = g.vertices().filter(|&v| g.degree(v) >= 4).collect();
    for branch in subsets(&cands, 5) {
        let pairs: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .map(|(i, j)| (branch[i], branch[j]))
            .collect();
        if connect_all(g, &branch, &pairs) {
            return true;
        }
    }
    false
}

fn has_k33_subdivision(g: &Graph) -> bool {
    let cands: Vec<usize> = g.vertices().filter(|&v| g.degree(v) >= 3).collect();
    for branch in subsets(&cands, 6) {
        // fix branch[0] on the left side; choose its two partners
        for rest in subsets(&[1, 2, 3, 4, 5], 2) {
            let left = [branch[0], branch[rest[0]], branch[rest[1]]];
            let right: Vec<usize> = (1..6)
                .filter(|i| !rest.contains(i))
                .map(|i| branch[i])
                .collect();
            let pairs: Vec<(usize, usize)> = left
                .iter()
                .flat_map(|&a| right.iter().map(move |&b| (a, b)))
                .collect();
            if connect_all(g, &branch, &pairs) {
                return true;
            }
        }
    }
    false
}

/// Finds internally-disjoint paths realizing all `pairs`, with interior
/// vertices drawn (each at most once) from outside the branch set.
fn connect_all(g: &Graph, branch: &[usize], pairs: &[(usize, usize)]) -> bool {
    let mut avail: BTreeSet<usize> = g.vertices().collect();
    for &b in branch {
        avail.remove(&b);
    }
    connect_from(g, pairs, 0, &mut avail)
}

fn connect_from(g: &Graph, pairs: &[(usize, usize)], idx: usize, avail: &mut BTreeSet<usize>) -> bool {
    if idx == pairs.len() {
        return true;
    }
    let (a, b) = pairs[idx];
    // DFS over simple paths a -> b whose interior stays inside avail
    fn paths(
        g: &Graph,
        cur: usize,
        target: usize,
        avail: &mut BTreeSet<usize>,
        used: &mut Vec<usize>,
        pairs: &[(usize, usize)],
        idx: usize,
    ) -> bool {
        if g.has_edge(cur, target) && connect_from(g, pairs, idx + 1, avail) {
            return true;
        }
        let options: Vec<usize> = g.neighbors(cur).filter(|w| avail.contains(w)).collect();
        for w in options {
            avail.remove(&w);
            used.push(w);
            if paths(g, w, target, avail, used, pairs, idx) {
                return true;
            }
            used.pop();
            avail.insert(w);
        }
        false
    }
    let mut used = Vec::new();
    paths(g, a, b, avail, &mut used, pairs, idx)
}

// ---------------------------------------------------------------------------
// the shared labeled-instance sample
// ---------------------------------------------------------------------------

/// Deterministic labeled instances over the isomorph-free corpus of all
/// graphs with up to `max_n` vertices: label sets of size at most two on
/// each side, denser graphs sampled more lightly. Returns at least 10,000
/// instances for `max_n = 7`.
pub fn labeled_sample(max_n: usize) -> Vec<LabeledInstance> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5142_177e);
    for n in 1..=max_n {
        for g in sqroot::oracle::small_graphs(n) {
            let edges: Vec<Edge> = g.edges().collect();
            let samples = if edges.len() >= 16 { 2 } else { 9 };
            for _ in 0..samples {
                let pick = |rng: &mut ChaCha8Rng| -> BTreeSet<Edge> {
                    if edges.is_empty() {
                        return BTreeSet::new();
                    }
                    let want = rng.random_range(0..=2usize);
                    let mut set = BTreeSet::new();
                    for _ in 0..want {
                        set.insert(edges[rng.random_range(0..edges.len())]);
                    }
                    set
                };
                let forced = pick(&mut rng);
                let forbidden = pick(&mut rng);
                out.push(LabeledInstance::new(g.clone(), forced, forbidden));
            }
        }
    }
    out
}
