//! Square roots of graphs, with forced and forbidden root edges.
//!
//! A graph `H` is a square root of `G` when `G` has exactly the edges
//! between vertices at distance 1 or 2 in `H`. This crate decides and
//! constructs such roots for the labeled variant of the problem, where a
//! set `R` of edges must appear in the root and a set `B` must not:
//!
//! * [`graph`]: the immutable simple-graph value type and structural
//!   primitives (squaring, blocks, twins, exact average degree);
//! * [`recognizer`]: detection of recognizable edges and their
//!   `(u,v)`-partitions, the certificates that pin down root edges;
//! * [`reduction`]: the edge reduction loop over labeled instances, with
//!   a replayable trace for rebuilding a root of the original graph;
//! * [`oracle`]: an exact backtracking solver and root enumerator for
//!   small graphs, plus an isomorph-free small-graph corpus;
//! * [`kernelizer`]: component reduction and the linear kernel for graphs
//!   that are planar after deleting at most `k` vertices, plus instance
//!   generators;
//! * [`twsolver`]: exact maximum average degree, treewidth search, the
//!   tree-decomposition dynamic program, and the end-to-end pipeline for
//!   graphs of maximum average degree below 46/11.

pub mod graph;
pub mod kernelizer;
pub mod oracle;
pub mod recognizer;
pub mod reduction;
pub mod twsolver;

pub use graph::{BlockDecomposition, Edge, Graph};
pub use kernelizer::{
    generate_apex_square, generate_hkt_root, hkt_planar_square_check, kernelize, KernelOutcome,
    COMPONENT_SIZE_LIMIT, KERNEL_VERTEX_FACTOR,
};
pub use oracle::{enumerate_roots, solve_labeled, SearchLimits, SolveOutcome};
pub use recognizer::{find_recognizable_edge, uv_partition, UVPartition};
pub use reduction::{
    edge_reduce, restore_solution, verify_solution, EdgeReduceOutcome, LabeledInstance,
    ReductionEvent, ReductionTrace,
};
pub use twsolver::{
    h_tree_decomposition, mad_solve, mad_threshold, max_average_degree, solve_labeled_tw,
    treewidth_at_most, validate_decomposition, MadOutcome, TreeDecomposition, TwOutcome,
};
