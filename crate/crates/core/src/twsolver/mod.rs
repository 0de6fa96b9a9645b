//! Treewidth machinery and the polynomial pipeline for graphs of maximum
//! average degree below 46/11: exact densest-subgraph density, an exact
//! treewidth decision via elimination orderings, the block–cut-tree
//! decomposition built from a root, and a dynamic program solving labeled
//! square-root instances over any valid tree decomposition.

mod dp;
mod mad;
mod treewidth;

pub use dp::{solve_labeled_tw, TwOutcome};
pub use mad::{max_average_degree, max_average_degree_flow};
pub use treewidth::treewidth_at_most;

use crate::graph::Graph;
use crate::reduction::{
    edge_reduce, restore_solution, verify_solution, EdgeReduceOutcome, LabeledInstance,
};
use num_rational::Rational64;
use std::collections::BTreeSet;

/// A tree of bags covering the graph: bags cover every vertex, every edge
/// lies inside some bag, and the bags holding any fixed vertex form a
/// connected subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Sorted vertex lists, one per tree node.
    pub bags: Vec<Vec<usize>>,
    /// Undirected tree edges between bag indices.
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; -1 for the all-empty decomposition.
    pub fn width(&self) -> isize {
        self.bags.iter().map(|b| b.len()).max().unwrap_or(0) as isize - 1
    }

    /// Single-bag decomposition holding all of `g`.
    pub fn trivial(g: &Graph) -> Self {
        TreeDecomposition {
            bags: vec![g.vertices().collect()],
            tree_edges: Vec::new(),
        }
    }
}

/// Exhaustively checks the three decomposition conditions plus tree shape.
pub fn validate_decomposition(g: &Graph, td: &TreeDecomposition) -> bool {
    let nodes = td.bags.len();
    if nodes == 0 {
        return false;
    }
    // a tree: n-1 edges, connected
    if td.tree_edges.len() != nodes - 1 {
        return false;
    }
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in &td.tree_edges {
        if a >= nodes || b >= nodes || a == b {
            return false;
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; nodes];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    // bags sorted, in range, duplicate-free
    for bag in &td.bags {
        if bag.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        if bag.iter().any(|&v| v >= g.vertex_count()) {
            return false;
        }
    }
    // (i) cover vertices
    let covered: BTreeSet<usize> = td.bags.iter().flatten().copied().collect();
    if covered.len() != g.vertex_count() {
        return false;
    }
    // (ii) cover edges
    for e in g.edges() {
        let inside = td
            .bags
            .iter()
            .any(|bag| bag.binary_search(&e.u()).is_ok() && bag.binary_search(&e.v()).is_ok());
        if !inside {
            return false;
        }
    }
    // (iii) per-vertex connectivity
    for v in g.vertices() {
        let holders: Vec<usize> = (0..nodes)
            .filter(|&i| td.bags[i].binary_search(&v).is_ok())
            .collect();
        let inset: BTreeSet<usize> = holders.iter().copied().collect();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut stack = vec![holders[0]];
        seen.insert(holders[0]);
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if inset.contains(&y) && seen.insert(y) {
                    stack.push(y);
                }
            }
        }
        if seen.len() != holders.len() {
            return false;
        }
    }
    true
}

/// Builds the block–cut-vertex tree decomposition of `square(h)` from a
/// connected root `h`: one bag per block (its vertices) and one per cut
/// vertex (its closed neighborhood in `h`), joined whenever the block
/// contains the cut vertex. Panics when `h` is disconnected.
pub fn h_tree_decomposition(h: &Graph) -> TreeDecomposition {
    assert!(
        h.vertex_count() > 0 && h.is_connected(),
        "the block-cut tree of a disconnected graph is a forest, not a tree"
    );
    let dec = h.blocks_and_cuts();
    let cuts: Vec<usize> = dec.cut_vertices.iter().copied().collect();
    let mut bags: Vec<Vec<usize>> = dec.blocks.clone();
    let block_count = bags.len();
    let mut tree_edges = Vec::new();
    for (ci, &u) in cuts.iter().enumerate() {
        let mut bag: Vec<usize> = h.neighbors(u).collect();
        bag.push(u);
        bag.sort_unstable();
        bags.push(bag);
        for (bi, block) in dec.blocks.iter().enumerate() {
            if block.binary_search(&u).is_ok() {
                tree_edges.push((bi, block_count + ci));
            }
        }
    }
    TreeDecomposition { bags, tree_edges }
}

/// The exact applicability threshold 46/11 of the low-density pipeline.
pub fn mad_threshold() -> Rational64 {
    Rational64::new(46, 11)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MadOutcome {
    Solution(Graph),
    No,
    /// The maximum average degree is at least 46/11; the pipeline makes no
    /// claim about such graphs.
    NotApplicable,
}

/// Decides square root for graphs of maximum average degree below 46/11:
/// edge reduction, then a width-5 decomposition search (its failure proves
/// there is no root), then the decomposition dynamic program, with the
/// reduction trace replayed over the witness.
pub fn mad_solve(g: &Graph) -> MadOutcome {
    if g.vertex_count() == 0 {
        return MadOutcome::Solution(Graph::new(0));
    }
    if max_average_degree(g) >= mad_threshold() {
        return MadOutcome::NotApplicable;
    }
    let inst = LabeledInstance::unlabeled(g.clone());
    let (reduced, trace) = match edge_reduce(&inst) {
        EdgeReduceOutcome::No => return MadOutcome::No,
        EdgeReduceOutcome::Reduced { instance, trace } => (instance, trace),
    };
    let td = match treewidth_at_most(&reduced.graph, 5) {
        Some(td) => td,
        // after reduction, a residue of a graph this sparse that still has
        // a root must have treewidth at most 5
        None => return MadOutcome::No,
    };
    match solve_labeled_tw(&reduced, &td) {
        TwOutcome::No => MadOutcome::No,
        TwOutcome::Solution(h_reduced) => {
            let h = restore_solution(&trace, &h_reduced);
            debug_assert!(verify_solution(&inst, &h));
            MadOutcome::Solution(h)
        }
    }
}
