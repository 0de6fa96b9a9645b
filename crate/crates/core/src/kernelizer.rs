//! Component reduction and the linear kernel for almost-planar graphs.
//!
//! After edge reduction, a planar graph with a root can only have small
//! connected components (at most [`COMPONENT_SIZE_LIMIT`] vertices), so
//! those are solved outright by the exact oracle. What survives in a graph
//! that is planar after deleting `k` vertices is bounded by
//! [`KERNEL_VERTEX_FACTOR`]` * k` vertices; a larger residue means there
//! is no root at all.
//!
//! Also here: the degree/block/cut-vertex characterization of graphs whose
//! square is planar, and seeded generators producing such roots and their
//! almost-planar squares for the test corpora.

use crate::graph::{Edge, Graph};
use crate::oracle::SolveOutcome;
use crate::reduction::{
    edge_reduce, restore_solution, verify_solution, EdgeReduceOutcome, LabeledInstance,
    ReductionTrace,
};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fmt;

/// Components no larger than this are handed to the exact oracle.
pub const COMPONENT_SIZE_LIMIT: usize = 12;

/// A residue with more than this many vertices per unit of `k` has no root.
pub const KERNEL_VERTEX_FACTOR: usize = 137;

/// The square of `H` is planar exactly when every vertex has degree at most
/// three, every block with more than four vertices is an even cycle, and no
/// three cut vertices are mutually adjacent.
pub fn hkt_planar_square_check(h: &Graph) -> bool {
    if h.max_degree() > 3 {
        return false;
    }
    let dec = h.blocks_and_cuts();
    for block in &dec.blocks {
        if block.len() > 4 {
            if block.len() % 2 != 0 {
                return false;
            }
            let (sub, _) = h.induced_subgraph(block);
            if sub.vertices().any(|v| sub.degree(v) != 2) {
                return false;
            }
        }
    }
    // a triangle of cut vertices
    for &u in &dec.cut_vertices {
        for v in h.neighbors(u).filter(|v| *v > u) {
            if !dec.cut_vertices.contains(&v) {
                continue;
            }
            let has_third = h
                .neighbor_set(u)
                .intersection(h.neighbor_set(v))
                .any(|w| dec.cut_vertices.contains(w));
            if has_third {
                return false;
            }
        }
    }
    true
}

/// A solved-and-removed component: its vertices and the root edges found
/// for it, both in the ids of the graph it was cut from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolvedComponent {
    pub vertices: Vec<usize>,
    pub root_edges: Vec<Edge>,
}

/// Result of removing all oracle-solved small components.
#[derive(Debug, Clone)]
pub struct ComponentReduction {
    /// Residual instance, relabeled to dense ids.
    pub residual: LabeledInstance,
    /// Residual id -> id in the input instance.
    pub vertex_map: Vec<usize>,
    pub solved: Vec<SolvedComponent>,
}

#[derive(Debug, Clone)]
pub enum ComponentOutcome {
    /// Some small component has no solution, hence neither has the whole.
    No,
    Reduced(ComponentReduction),
}

/// The component oracle ran out of budget; never silently converted into
/// an answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExhausted;

impl fmt::Display for BudgetExhausted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("component oracle exhausted its node budget")
    }
}

impl std::error::Error for BudgetExhausted {}

fn sub_instance(inst: &LabeledInstance, verts: &[usize]) -> (LabeledInstance, Vec<usize>) {
    let (sub, map) = inst.graph.induced_subgraph(verts);
    let mut local = vec![usize::MAX; inst.graph.vertex_count()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let remap = |set: &BTreeSet<Edge>| {
        set.iter()
            .filter(|e| local[e.u()] != usize::MAX && local[e.v()] != usize::MAX)
            .map(|e| Edge::new(local[e.u()], local[e.v()]))
            .collect::<BTreeSet<Edge>>()
    };
    let forced = remap(&inst.forced);
    let forbidden = remap(&inst.forbidden);
    (LabeledInstance::new(sub, forced, forbidden), map)
}

/// Solves every connected component with at most [`COMPONENT_SIZE_LIMIT`]
/// vertices through `oracle` and removes it. Intended to run on instances
/// with no recognizable edges. `jobs > 1` solves components on that many
/// threads; the result does not depend on `jobs`.
pub fn component_reduce<F>(
    inst: &LabeledInstance,
    oracle: &F,
    jobs: usize,
) -> Result<ComponentOutcome, BudgetExhausted>
where
    F: Fn(&LabeledInstance) -> SolveOutcome + Sync,
{
    let comps = inst.graph.connected_components();
    let mut small: Vec<&Vec<usize>> = Vec::new();
    let mut keep: Vec<usize> = Vec::new();
    for comp in &comps {
        if comp.len() <= COMPONENT_SIZE_LIMIT {
            small.push(comp);
        } else {
            keep.extend(comp.iter().copied());
        }
    }

    let tasks: Vec<(LabeledInstance, Vec<usize>)> =
        small.iter().map(|comp| sub_instance(inst, comp)).collect();
    let mut outcomes: Vec<Option<SolveOutcome>> = vec![None; tasks.len()];
    if jobs <= 1 || tasks.len() <= 1 {
        for (slot, (sub, _)) in outcomes.iter_mut().zip(&tasks) {
            *slot = Some(oracle(sub));
        }
    } else {
        let next = std::sync::atomic::AtomicUsize::new(0);
        let results = std::sync::Mutex::new(vec![None; tasks.len()]);
        std::thread::scope(|scope| {
            for _ in 0..jobs.min(tasks.len()) {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                    if i >= tasks.len() {
                        break;
                    }
                    let out = oracle(&tasks[i].0);
                    results.lock().unwrap()[i] = Some(out);
                });
            }
        });
        outcomes = results.into_inner().unwrap();
    }

    let mut solved = Vec::new();
    for ((sub_outcome, (_, map)), comp) in outcomes.into_iter().zip(&tasks).zip(&small) {
        match sub_outcome.expect("every task ran") {
            SolveOutcome::Timeout => return Err(BudgetExhausted),
            SolveOutcome::No => return Ok(ComponentOutcome::No),
            SolveOutcome::Solution(h) => {
                let root_edges = h
                    .edges()
                    .map(|e| Edge::new(map[e.u()], map[e.v()]))
                    .collect();
                solved.push(SolvedComponent {
                    vertices: (*comp).clone(),
                    root_edges,
                });
            }
        }
    }

    keep.sort_unstable();
    let (residual, vertex_map) = sub_instance(inst, &keep);
    Ok(ComponentOutcome::Reduced(ComponentReduction {
        residual,
        vertex_map,
        solved,
    }))
}

/// Everything needed to lift a root of the kernel back to a root of the
/// original graph.
#[derive(Debug, Clone)]
pub struct KernelBundle {
    /// The kernel: no recognizable edges, every component larger than
    /// [`COMPONENT_SIZE_LIMIT`], at most `KERNEL_VERTEX_FACTOR * k`
    /// vertices.
    pub instance: LabeledInstance,
    /// Kernel id -> vertex id of the original graph.
    pub vertex_map: Vec<usize>,
    pub trace: ReductionTrace,
    pub solved: Vec<SolvedComponent>,
    pub original_vertices: usize,
}

impl KernelBundle {
    /// Combines a root of the kernel with the solved components and
    /// replays the reduction trace backwards, yielding a root of the
    /// original graph.
    pub fn lift(&self, kernel_root: &Graph) -> Graph {
        assert_eq!(
            kernel_root.vertex_count(),
            self.instance.graph.vertex_count(),
            "root does not match the kernel"
        );
        let mut edges: Vec<(usize, usize)> = kernel_root
            .edges()
            .map(|e| (self.vertex_map[e.u()], self.vertex_map[e.v()]))
            .collect();
        for comp in &self.solved {
            edges.extend(comp.root_edges.iter().map(|e| e.endpoints()));
        }
        let reduced_root = Graph::from_edges(self.original_vertices, edges);
        restore_solution(&self.trace, &reduced_root)
    }
}

#[derive(Debug, Clone)]
pub enum KernelOutcome {
    /// Solved during reduction; carries a witness root of the original
    /// graph when one was assembled.
    Yes(Option<Graph>),
    No,
    Kernel(KernelBundle),
}

/// The kernelization pipeline: edge reduction, component reduction, then
/// the size cutoff. `k` is a caller promise that the graph is planar after
/// deleting at most `k` vertices; a wrong promise can only produce a wrong
/// `No` through the cutoff, never a wrong `Yes`.
pub fn kernelize<F>(
    inst: &LabeledInstance,
    k: usize,
    oracle: &F,
    jobs: usize,
) -> Result<KernelOutcome, BudgetExhausted>
where
    F: Fn(&LabeledInstance) -> SolveOutcome + Sync,
{
    let (reduced, trace) = match edge_reduce(inst) {
        EdgeReduceOutcome::No => return Ok(KernelOutcome::No),
        EdgeReduceOutcome::Reduced { instance, trace } => (instance, trace),
    };
    let reduction = match component_reduce(&reduced, oracle, jobs)? {
        ComponentOutcome::No => return Ok(KernelOutcome::No),
        ComponentOutcome::Reduced(r) => r,
    };
    let bundle = KernelBundle {
        original_vertices: inst.graph.vertex_count(),
        instance: reduction.residual,
        vertex_map: reduction.vertex_map,
        trace,
        solved: reduction.solved,
    };
    if bundle.instance.graph.vertex_count() == 0 {
        let root = bundle.lift(&Graph::new(0));
        debug_assert!(verify_solution(inst, &root));
        return Ok(KernelOutcome::Yes(Some(root)));
    }
    if bundle.instance.graph.vertex_count() > KERNEL_VERTEX_FACTOR * k {
        return Ok(KernelOutcome::No);
    }
    Ok(KernelOutcome::Kernel(bundle))
}

// ---------------------------------------------------------------------------
// seeded generators
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
enum BlockKind {
    Bridge,
    Triangle,
    Square4,
    Diamond,
    EvenCycle(usize),
}

impl BlockKind {
    /// Extra degree the attachment vertex picks up.
    fn attach_degree(self) -> usize {
        match self {
            BlockKind::Bridge => 1,
            _ => 2,
        }
    }

    fn new_vertices(self) -> usize {
        match self {
            BlockKind::Bridge => 1,
            BlockKind::Triangle => 2,
            BlockKind::Square4 | BlockKind::Diamond => 3,
            BlockKind::EvenCycle(len) => len - 1,
        }
    }
}

struct RootBuilder {
    adj: Vec<BTreeSet<usize>>,
    /// number of blocks each vertex belongs to; >= 2 marks a cut vertex
    block_count: Vec<usize>,
}

impl RootBuilder {
    fn add_vertex(&mut self) -> usize {
        self.adj.push(BTreeSet::new());
        self.block_count.push(1);
        self.adj.len() - 1
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    /// Spells out one block, gluing it at `at` when given. Returns the
    /// vertex list of the block.
    fn place(&mut self, kind: BlockKind, at: Option<usize>) -> Vec<usize> {
        let anchor = at.unwrap_or_else(|| self.add_vertex());
        if at.is_some() {
            self.block_count[anchor] += 1;
        }
        let fresh: Vec<usize> = (0..kind.new_vertices()).map(|_| self.add_vertex()).collect();
        let mut verts = vec![anchor];
        verts.extend(&fresh);
        match kind {
            BlockKind::Bridge => self.add_edge(verts[0], verts[1]),
            BlockKind::Triangle | BlockKind::Square4 => {
                for i in 0..verts.len() {
                    self.add_edge(verts[i], verts[(i + 1) % verts.len()]);
                }
            }
            BlockKind::EvenCycle(_) => {
                for i in 0..verts.len() {
                    self.add_edge(verts[i], verts[(i + 1) % verts.len()]);
                }
            }
            BlockKind::Diamond => {
                // anchor is a degree-2 corner; fresh[0], fresh[1] carry the chord
                self.add_edge(verts[0], fresh[0]);
                self.add_edge(verts[0], fresh[1]);
                self.add_edge(fresh[2], fresh[0]);
                self.add_edge(fresh[2], fresh[1]);
                self.add_edge(fresh[0], fresh[1]);
            }
        }
        verts
    }

    /// Attaching at `w` makes it a cut vertex; refuse when some triangle
    /// through `w` already has two cut vertices.
    fn attach_ok(&self, w: usize, extra_degree: usize) -> bool {
        if self.adj[w].len() + extra_degree > 3 {
            return false;
        }
        for &a in &self.adj[w] {
            if self.block_count[a] < 2 {
                continue;
            }
            for &b in &self.adj[w] {
                if b > a && self.block_count[b] >= 2 && self.adj[a].contains(&b) {
                    return false;
                }
            }
        }
        true
    }
}

fn pick_kind(rng: &mut ChaCha8Rng) -> BlockKind {
    match rng.random_range(0..100u32) {
        0..=49 => BlockKind::Bridge,
        50..=64 => BlockKind::Triangle,
        65..=74 => BlockKind::Square4,
        75..=79 => BlockKind::Diamond,
        80..=89 => BlockKind::EvenCycle(6),
        90..=94 => BlockKind::EvenCycle(8),
        _ => BlockKind::EvenCycle(10),
    }
}

fn build_hkt_root(rng: &mut ChaCha8Rng, target_vertices: usize) -> Graph {
    let mut b = RootBuilder {
        adj: Vec::new(),
        block_count: Vec::new(),
    };
    b.place(pick_kind(rng), None);
    while b.adj.len() < target_vertices {
        let kind = pick_kind(rng);
        let mut placed = false;
        for attempt in [kind, BlockKind::Bridge] {
            let candidates: Vec<usize> = (0..b.adj.len())
                .filter(|&w| b.attach_ok(w, attempt.attach_degree()))
                .collect();
            if let Some(&w) = candidates.as_slice().choose(rng) {
                b.place(attempt, Some(w));
                placed = true;
                break;
            }
        }
        if !placed {
            break; // saturated (e.g. a lone K4-like start); return what we have
        }
    }
    let n = b.adj.len();
    let g = Graph::from_edges(
        n,
        (0..n).flat_map(|u| {
            b.adj[u]
                .iter()
                .filter(move |&&v| u < v)
                .map(move |&v| (u, v))
        }),
    );
    debug_assert!(hkt_planar_square_check(&g));
    g
}

/// Random connected graph satisfying all three planar-square conditions:
/// a tree of bridges, small blocks and even cycles with maximum degree 3
/// and no cut-vertex triangle. Deterministic in `seed`.
pub fn generate_hkt_root(seed: u64, target_vertices: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    build_hkt_root(&mut rng, target_vertices)
}

/// A generated almost-planar square together with its promise `k` and the
/// root it was squared from.
#[derive(Debug, Clone)]
pub struct ApexSquare {
    pub square: Graph,
    pub k: usize,
    /// The root whose square is `square`; apex vertices are the trailing
    /// `k` ids.
    pub root: Graph,
    pub apexes: Vec<usize>,
}

/// Builds a root made of a planar-square part plus `k` apex vertices, and
/// returns its square. Each apex attaches to at most four vertices chosen
/// inside the closed neighborhood of a single root vertex, so deleting the
/// apexes from the square leaves exactly the square of the planar part;
/// the output is therefore planar after deleting `k` vertices.
pub fn generate_apex_square(seed: u64, k: usize, root_target_vertices: usize) -> ApexSquare {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = build_hkt_root(&mut rng, root_target_vertices);
    let n0 = base.vertex_count();
    let mut edges: Vec<(usize, usize)> = base.edges().map(|e| e.endpoints()).collect();
    let mut apexes = Vec::with_capacity(k);
    for i in 0..k {
        let apex = n0 + i;
        apexes.push(apex);
        let z = rng.random_range(0..n0);
        let mut pool: Vec<usize> = base.closed_neighborhood(z).into_iter().collect();
        pool.shuffle(&mut rng);
        let count = rng.random_range(1..=pool.len().min(4));
        for &t in pool.iter().take(count) {
            edges.push((apex, t));
        }
    }
    let root = Graph::from_edges(n0 + k, edges);
    ApexSquare {
        square: root.square(),
        k,
        root,
        apexes,
    }
}
