//! Exact brute-force solving and root enumeration for small graphs, plus
//! the isomorph-free small-graph corpus the test suites run on.
//!
//! The solver searches over subsets `X` of the candidate root edges (every
//! root edge is a graph edge, since root-adjacent vertices are at distance
//! one) with two propagation rules:
//!
//! * a chosen path `u–w–v` forces `uv` to be a graph edge, so incident
//!   chosen edges whose far endpoints are non-adjacent prune immediately;
//! * every graph edge `uv` must be covered: by `uv ∈ X` or by a witness
//!   `w` with `uw, wv ∈ X`; when all covering options for some edge are
//!   dead the branch prunes, and a single live option is forced.

use crate::graph::{Edge, Graph};
use crate::reduction::{verify_solution, LabeledInstance};
use std::collections::HashSet;

/// Search budget. `None` removes the node cap entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub node_budget: Option<u64>,
}

impl SearchLimits {
    pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

    pub fn unlimited() -> Self {
        SearchLimits { node_budget: None }
    }

    pub fn budget(nodes: u64) -> Self {
        SearchLimits {
            node_budget: Some(nodes),
        }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: Some(Self::DEFAULT_NODE_BUDGET),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolveOutcome {
    Solution(Graph),
    No,
    /// The node budget ran out before the search finished.
    Timeout,
}

/// Outcome plus the deterministic node count of the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: SolveOutcome,
    pub nodes: u64,
}

/// All labeled roots found, in canonical order. `complete` is false when
/// the root cap or the node budget stopped the search early.
#[derive(Debug, Clone)]
pub struct RootEnumeration {
    pub roots: Vec<Graph>,
    pub complete: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum EState {
    Undecided,
    In,
    Out,
}

struct Searcher<'a> {
    g: &'a Graph,
    edges: Vec<Edge>,
    /// dense (u, v) -> edge index lookup; usize::MAX marks non-edges
    eidx: Vec<Vec<usize>>,
    /// per edge: candidate witness vertices (common neighbors), ascending
    witnesses: Vec<Vec<usize>>,
    state: Vec<EState>,
    trail: Vec<usize>,
    nodes: u64,
    budget: Option<u64>,
    /// enumeration keeps branching after all edges are covered
    exhaustive: bool,
    cap: usize,
    found: Vec<Vec<Edge>>,
}

enum SearchEnd {
    Exhausted,
    FoundEnough,
    Budget,
}

impl<'a> Searcher<'a> {
    fn new(g: &'a Graph, limits: SearchLimits, exhaustive: bool, cap: usize) -> Self {
        let n = g.vertex_count();
        let edges: Vec<Edge> = g.edges().collect();
        let mut eidx = vec![vec![usize::MAX; n]; n];
        for (i, e) in edges.iter().enumerate() {
            eidx[e.u()][e.v()] = i;
            eidx[e.v()][e.u()] = i;
        }
        let witnesses = edges
            .iter()
            .map(|e| {
                g.neighbor_set(e.u())
                    .intersection(g.neighbor_set(e.v()))
                    .copied()
                    .collect()
            })
            .collect();
        Searcher {
            g,
            edges,
            eidx,
            witnesses,
            state: vec![EState::Undecided; g.edge_count()],
            trail: Vec::new(),
            nodes: 0,
            budget: limits.node_budget,
            exhaustive,
            cap,
            found: Vec::new(),
        }
    }

    /// Assigns and applies the local path-consistency rule. Returns false
    /// on conflict. Every change lands on the trail.
    fn assign(&mut self, i: usize, val: EState) -> bool {
        match self.state[i] {
            EState::Undecided => {}
            s => return s == val,
        }
        self.state[i] = val;
        self.trail.push(i);
        if val == EState::In {
            let (u, v) = self.edges[i].endpoints();
            if !self.enforce_paths(u, v) || !self.enforce_paths(v, u) {
                return false;
            }
        }
        true
    }

    /// Edge (anchor, far) was chosen: any chosen edge (anchor, w) makes
    /// w–far a 2-path, so w and far must be adjacent; non-adjacent w get
    /// their anchor edge forced out.
    fn enforce_paths(&mut self, anchor: usize, far: usize) -> bool {
        let nbrs: Vec<usize> = self.g.neighbors(anchor).collect();
        for w in nbrs {
            if w == far || self.g.has_edge(w, far) {
                continue;
            }
            let j = self.eidx[anchor][w];
            match self.state[j] {
                EState::In => return false,
                EState::Undecided => {
                    if !self.assign(j, EState::Out) {
                        return false;
                    }
                }
                EState::Out => {}
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let i = self.trail.pop().unwrap();
            self.state[i] = EState::Undecided;
        }
    }

    /// Live covering options of edge `i`: the edge itself plus witnesses.
    /// Returns (satisfied, live count, forced edges of the single live
    /// option when live == 1).
    fn coverage(&self, i: usize) -> (bool, usize, Vec<usize>) {
        if self.state[i] == EState::In {
            return (true, 0, Vec::new());
        }
        let (u, v) = self.edges[i].endpoints();
        let mut live = 0;
        let mut single: Vec<usize> = Vec::new();
        if self.state[i] == EState::Undecided {
            live += 1;
            single = vec![i];
        }
        for &w in &self.witnesses[i] {
            let a = self.eidx[u][w];
            let b = self.eidx[w][v];
            let (sa, sb) = (self.state[a], self.state[b]);
            if sa == EState::Out || sb == EState::Out {
                continue;
            }
            if sa == EState::In && sb == EState::In {
                return (true, 0, Vec::new());
            }
            live += 1;
            if live == 1 {
                single = [a, b]
                    .into_iter()
                    .filter(|&j| self.state[j] == EState::Undecided)
                    .collect();
            }
        }
        (false, live, single)
    }

    /// Coverage fixpoint: forces the last live option of any uncovered
    /// edge; prunes when an edge has none. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            let mut changed = false;
            for i in 0..self.edges.len() {
                let (sat, live, single) = self.coverage(i);
                if sat {
                    continue;
                }
                if live == 0 {
                    return false;
                }
                if live == 1 && !single.is_empty() {
                    for j in single {
                        if !self.assign(j, EState::In) {
                            return false;
                        }
                    }
                    changed = true;
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// The next branch variable: the undecided edge tied to the uncovered
    /// graph edge with the fewest live options; in exhaustive mode, any
    /// remaining undecided edge once everything is covered.
    fn pick_branch(&self) -> Option<usize> {
        let mut best: Option<(usize, usize)> = None; // (live, edge idx to branch on)
        for i in 0..self.edges.len() {
            let (sat, live, _) = self.coverage(i);
            if sat {
                continue;
            }
            let var = if self.state[i] == EState::Undecided {
                i
            } else {
                let (u, v) = self.edges[i].endpoints();
                let mut var = usize::MAX;
                for &w in &self.witnesses[i] {
                    let a = self.eidx[u][w];
                    let b = self.eidx[w][v];
                    if self.state[a] == EState::Out || self.state[b] == EState::Out {
                        continue;
                    }
                    var = if self.state[a] == EState::Undecided { a } else { b };
                    break;
                }
                var
            };
            debug_assert!(var != usize::MAX, "uncovered edge with no live option");
            if best.is_none_or(|(l, _)| live < l) {
                best = Some((live, var));
                if live <= 2 {
                    break; // can't do better than a near-forced branch
                }
            }
        }
        if let Some((_, var)) = best {
            return Some(var);
        }
        if self.exhaustive {
            return (0..self.edges.len()).find(|&i| self.state[i] == EState::Undecided);
        }
        None
    }

    fn record_leaf(&mut self) {
        let chosen: Vec<Edge> = (0..self.edges.len())
            .filter(|&i| self.state[i] == EState::In)
            .map(|i| self.edges[i])
            .collect();
        self.found.push(chosen);
    }

    fn search(&mut self) -> SearchEnd {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                return SearchEnd::Budget;
            }
        }
        if !self.propagate() {
            return SearchEnd::Exhausted;
        }
        match self.pick_branch() {
            None => {
                // solving mode: everything covered, leftovers default out
                self.record_leaf();
                if self.found.len() >= self.cap {
                    SearchEnd::FoundEnough
                } else {
                    SearchEnd::Exhausted
                }
            }
            Some(var) => {
                for val in [EState::In, EState::Out] {
                    let mark = self.trail.len();
                    if self.assign(var, val) {
                        match self.search() {
                            SearchEnd::Exhausted => {}
                            end => return end,
                        }
                    }
                    self.undo_to(mark);
                }
                SearchEnd::Exhausted
            }
        }
    }
}

/// Decides a labeled instance by propagation-guided backtracking.
/// Intended for component-sized graphs (about 12 vertices); larger inputs
/// are allowed but may exhaust the node budget, which is reported as an
/// explicit `Timeout`.
pub fn solve_labeled(inst: &LabeledInstance, limits: SearchLimits) -> SolveReport {
    let mut s = Searcher::new(&inst.graph, limits, false, 1);
    let mut feasible = true;
    for e in &inst.forced {
        feasible = feasible && s.assign(s.eidx[e.u()][e.v()], EState::In);
    }
    for e in &inst.forbidden {
        feasible = feasible && s.assign(s.eidx[e.u()][e.v()], EState::Out);
    }
    if !feasible {
        return SolveReport {
            outcome: SolveOutcome::No,
            nodes: 0,
        };
    }
    let end = s.search();
    let nodes = s.nodes;
    let outcome = match end {
        SearchEnd::Budget => SolveOutcome::Timeout,
        _ => match s.found.pop() {
            Some(edges) => {
                let h = Graph::from_edges(inst.graph.vertex_count(), edges.iter().map(|e| e.endpoints()));
                debug_assert!(verify_solution(inst, &h));
                SolveOutcome::Solution(h)
            }
            None => SolveOutcome::No,
        },
    };
    SolveReport { outcome, nodes }
}

/// Enumerates every labeled root of `g` (all `H` with `H^2 = g`), up to
/// `cap` many. The result is complete exactly when neither the cap nor the
/// node budget interrupted the search.
pub fn enumerate_roots(g: &Graph, cap: usize, limits: SearchLimits) -> RootEnumeration {
    let mut s = Searcher::new(g, limits, true, cap.max(1));
    let end = s.search();
    let complete = matches!(end, SearchEnd::Exhausted);
    let nodes = s.nodes;
    let mut edge_lists = std::mem::take(&mut s.found);
    edge_lists.sort();
    let roots = edge_lists
        .into_iter()
        .map(|es| Graph::from_edges(g.vertex_count(), es.iter().map(|e| e.endpoints())))
        .collect();
    RootEnumeration {
        roots,
        complete,
        nodes,
    }
}

// ---------------------------------------------------------------------------
// isomorph-free small-graph corpus
// ---------------------------------------------------------------------------

/// Adjacency rows as bitmasks; supports up to 16 vertices.
type Rows = Vec<u16>;

fn refine_colors(n: usize, rows: &[u16]) -> Vec<u32> {
    let mut color: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
    loop {
        let mut keys: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u32> = (0..n)
                .filter(|&w| rows[v] >> w & 1 == 1)
                .map(|w| color[w])
                .collect();
            nb.sort_unstable();
            keys.push((color[v], nb));
        }
        let mut sorted: Vec<&(u32, Vec<u32>)> = keys.iter().collect();
        sorted.sort();
        sorted.dedup();
        let new_color: Vec<u32> = keys
            .iter()
            .map(|k| sorted.binary_search(&k).unwrap() as u32)
            .collect();
        if new_color == color {
            return color;
        }
        color = new_color;
    }
}

/// Minimum upper-triangle code over all vertex orderings that respect the
/// refinement classes. Isomorphic graphs get equal codes; equal codes mean
/// isomorphic graphs.
fn canonical_code(n: usize, rows: &[u16]) -> u128 {
    if n <= 1 {
        return 0;
    }
    let color = refine_colors(n, rows);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (color[v], v));
    let required: Vec<u32> = order.iter().map(|&v| color[v]).collect();

    // backtracking with prefix pruning against the best code so far
    struct Ctx<'c> {
        n: usize,
        rows: &'c [u16],
        color: &'c [u32],
        required: &'c [u32],
        placed: Vec<usize>,
        prefix: Vec<u128>, // prefix[p] = code after placing p+1 vertices
        best: Option<Vec<u128>>,
    }
    fn go(c: &mut Ctx, pos: usize, used: u16) {
        if pos == c.n {
            if c.best.as_ref().is_none_or(|b| c.prefix < *b) {
                c.best = Some(c.prefix.clone());
            }
            return;
        }
        for v in 0..c.n {
            if used >> v & 1 == 1 || c.color[v] != c.required[pos] {
                continue;
            }
            let mut bits: u128 = 0;
            for (i, &p) in c.placed.iter().enumerate() {
                if c.rows[v] >> p & 1 == 1 {
                    bits |= 1 << i;
                }
            }
            let code = (c.prefix.last().copied().unwrap_or(0) << pos) | bits;
            if let Some(best) = &c.best {
                if code > best[pos] {
                    continue;
                }
            }
            c.placed.push(v);
            c.prefix.push(code);
            go(c, pos + 1, used | 1 << v);
            c.prefix.pop();
            c.placed.pop();
        }
    }
    let mut ctx = Ctx {
        n,
        rows,
        color: &color,
        required: &required,
        placed: Vec::with_capacity(n),
        prefix: Vec::with_capacity(n),
        best: None,
    };
    go(&mut ctx, 0, 0);
    *ctx.best.expect("at least one ordering").last().unwrap()
}

fn rows_to_graph(n: usize, rows: &[u16]) -> Graph {
    Graph::from_edges(
        n,
        (0..n).flat_map(|u| {
            (u + 1..n)
                .filter(move |&v| rows[u] >> v & 1 == 1)
                .map(move |v| (u, v))
        }),
    )
}

fn next_level(n: usize, prev: &[Rows], max_degree: Option<usize>) -> Vec<Rows> {
    let new = n - 1; // id of the added vertex
    let mut seen: HashSet<u128> = HashSet::new();
    let mut out = Vec::new();
    for parent in prev {
        for subset in 0u16..(1 << new) {
            if let Some(d) = max_degree {
                if (subset.count_ones() as usize) > d {
                    continue;
                }
                if (0..new).any(|v| subset >> v & 1 == 1 && parent[v].count_ones() as usize + 1 > d)
                {
                    continue;
                }
            }
            let mut rows = parent.clone();
            rows.push(subset);
            for v in 0..new {
                if subset >> v & 1 == 1 {
                    rows[v] |= 1 << new;
                }
            }
            if seen.insert(canonical_code(n, &rows)) {
                out.push(rows);
            }
        }
    }
    out
}

fn corpus(n: usize, max_degree: Option<usize>) -> Vec<Graph> {
    assert!(n >= 1, "corpus needs at least one vertex");
    let mut level: Vec<Rows> = vec![vec![0u16]];
    for k in 2..=n {
        level = next_level(k, &level, max_degree);
    }
    level.iter().map(|rows| rows_to_graph(n, rows)).collect()
}

/// All graphs on exactly `n` vertices, one per isomorphism class, built by
/// vertex extension with canonical-form deduplication. Guarded to `n <= 8`.
pub fn small_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 8, "full corpus is only generated up to 8 vertices");
    corpus(n, None)
}

/// Isomorph-free graphs on `n` vertices with maximum degree at most
/// `max_degree`.
pub fn small_graphs_max_degree(n: usize, max_degree: usize) -> Vec<Graph> {
    assert!(n <= 10, "degree-bounded corpus is only generated up to 10 vertices");
    corpus(n, Some(max_degree))
}
