//! Recognizable edges and their `(u,v)`-partitions.
//!
//! An edge `uv` is recognizable when the common neighborhood of `u` and `v`
//! splits into two nonempty cliques `(X, Y)` with no edges across, such that
//! the private neighbors of `u` avoid `Y` but touch `X`, and symmetrically
//! for `v`. Such a partition certifies that `uv` belongs to every square
//! root, that `X` is rooted at `u` and `Y` at `v` (up to the twin symmetry),
//! and that the private neighbors of `u` and `v` are not root-adjacent to
//! them.

use crate::graph::{Edge, Graph};

/// Witness that `uv` is recognizable for the ordered pair `(u, v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UVPartition {
    pub u: usize,
    pub v: usize,
    /// Clique of the common neighborhood tied to `u`; sorted, nonempty.
    pub x: Vec<usize>,
    /// Clique of the common neighborhood tied to `v`; sorted, nonempty.
    pub y: Vec<usize>,
}

impl UVPartition {
    pub fn edge(&self) -> Edge {
        Edge::new(self.u, self.v)
    }
}

fn common_neighbors(g: &Graph, u: usize, v: usize) -> Vec<usize> {
    g.neighbor_set(u)
        .intersection(g.neighbor_set(v))
        .copied()
        .collect()
}

fn is_clique(g: &Graph, verts: &[usize]) -> bool {
    verts
        .iter()
        .enumerate()
        .all(|(i, &a)| verts[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Checks all four partition conditions for the ordered pair `(u, v)`.
pub fn is_uv_partition(g: &Graph, u: usize, v: usize, x: &[usize], y: &[usize]) -> bool {
    if x.is_empty() || y.is_empty() {
        return false;
    }
    let z = common_neighbors(g, u, v);
    let mut union: Vec<usize> = x.iter().chain(y).copied().collect();
    union.sort_unstable();
    if union.windows(2).any(|w| w[0] == w[1]) || union != z {
        return false;
    }
    if !is_clique(g, x) || !is_clique(g, y) {
        return false;
    }
    if x.iter().any(|&a| y.iter().any(|&b| g.has_edge(a, b))) {
        return false;
    }
    private_conditions(g, u, v, x, y)
}

/// Conditions on the private neighbors: every `w` adjacent to `u` but not in
/// `N[v]` must avoid `Y` entirely and touch `X` at least once; symmetric for
/// the private neighbors of `v`.
fn private_conditions(g: &Graph, u: usize, v: usize, x: &[usize], y: &[usize]) -> bool {
    let side = |anchor: usize, other: usize, own: &[usize], opposite: &[usize]| {
        g.neighbors(anchor)
            .filter(|&w| w != other && !g.has_edge(w, other))
            .all(|w| {
                opposite.iter().all(|&b| !g.has_edge(w, b))
                    && own.iter().any(|&a| g.has_edge(w, a))
            })
    };
    side(u, v, x, y) && side(v, u, y, x)
}

/// Finds the `(u,v)`-partition for the ordered pair `(u, v)`, if any.
///
/// The common neighborhood `Z` admits the clique conditions exactly when
/// `G[Z]` is a disjoint union of two cliques, which are then forced to be
/// its two connected components; only the assignment of components to
/// `(X, Y)` remains, and the component holding the smallest vertex is tried
/// as `X` first.
pub fn uv_partition(g: &Graph, u: usize, v: usize) -> Option<UVPartition> {
    assert!(g.has_edge(u, v), "uv_partition requires an edge, got {u}-{v}");
    let z = common_neighbors(g, u, v);
    if z.len() < 2 {
        return None;
    }
    // components of G[Z]
    let mut comp_id = vec![usize::MAX; z.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for start in 0..z.len() {
        if comp_id[start] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut comp = vec![start];
        comp_id[start] = id;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..z.len() {
                if comp_id[j] == usize::MAX && g.has_edge(z[i], z[j]) {
                    comp_id[j] = id;
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        if comps.len() == 2 {
            return None; // three components already
        }
        comps.push(comp);
    }
    if comps.len() != 2 {
        return None;
    }
    let mut first: Vec<usize> = comps[0].iter().map(|&i| z[i]).collect();
    let mut second: Vec<usize> = comps[1].iter().map(|&i| z[i]).collect();
    first.sort_unstable();
    second.sort_unstable();
    if !is_clique(g, &first) || !is_clique(g, &second) {
        return None;
    }
    // z is sorted, so comps[0] contains the smallest vertex of Z
    debug_assert!(first[0] < second[0]);
    for (x, y) in [(&first, &second), (&second, &first)] {
        if private_conditions(g, u, v, x, y) {
            return Some(UVPartition {
                u,
                v,
                x: x.clone(),
                y: y.clone(),
            });
        }
    }
    None
}

/// Scans edges in canonical order, testing the ordered pair `(min, max)`
/// before `(max, min)`, and returns the first recognizable edge found.
/// A full scan costs O(m n^2).
pub fn find_recognizable_edge(g: &Graph) -> Option<(Edge, UVPartition)> {
    for e in g.edges() {
        let (a, b) = e.endpoints();
        if let Some(p) = uv_partition(g, a, b) {
            return Some((e, p));
        }
        if let Some(p) = uv_partition(g, b, a) {
            return Some((e, p));
        }
    }
    None
}
