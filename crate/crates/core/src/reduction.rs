//! The edge reduction loop over labeled instances.
//!
//! A labeled instance is a graph together with a forced edge set `R`
//! (must be in every solution root) and a forbidden edge set `B` (must be
//! in none). Each round finds a recognizable edge `uv` with partition
//! `(X, Y)`, derives the edges every root must and must not contain, checks
//! them against the labels, and removes `uv` together with the pairs whose
//! only short connection ran through it. The trace of rounds supports
//! rebuilding a root of the original graph from a root of the residue.

use crate::graph::{Edge, Graph};
use crate::recognizer::{find_recognizable_edge, UVPartition};
use std::collections::BTreeSet;
use std::fmt;

/// A graph with forced (`R`) and forbidden (`B`) root edges.
///
/// Both label sets must reference existing edges. `R` and `B` may overlap;
/// an overlap is an immediately detectable no-instance, not a construction
/// error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledInstance {
    pub graph: Graph,
    pub forced: BTreeSet<Edge>,
    pub forbidden: BTreeSet<Edge>,
}

impl LabeledInstance {
    pub fn new(graph: Graph, forced: BTreeSet<Edge>, forbidden: BTreeSet<Edge>) -> Self {
        for e in forced.iter().chain(&forbidden) {
            assert!(graph.contains(*e), "label on non-edge {e}");
        }
        LabeledInstance {
            graph,
            forced,
            forbidden,
        }
    }

    /// Plain square-root instance: no labels.
    pub fn unlabeled(graph: Graph) -> Self {
        LabeledInstance {
            graph,
            forced: BTreeSet::new(),
            forbidden: BTreeSet::new(),
        }
    }
}

/// Which branch fixed the orientation of the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwinBranch {
    /// `u`, `v` not true twins: the orientation is forced.
    NonTwin,
    /// True twins, labels force the flipped orientation.
    TwinFlipped,
    /// True twins, no label constraint: canonical orientation kept.
    TwinDefault,
}

impl fmt::Display for TwinBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TwinBranch::NonTwin => "nontwin",
            TwinBranch::TwinFlipped => "twin-flip",
            TwinBranch::TwinDefault => "twin-keep",
        })
    }
}

/// One reduction round, recorded against the graph as it was when the
/// round fired.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionEvent {
    /// The recognizable edge that was removed.
    pub edge: Edge,
    /// The oriented partition witnessing it.
    pub partition: UVPartition,
    pub branch: TwinBranch,
    /// Edges added to `R`: present in every root.
    pub forced: Vec<Edge>,
    /// Edges added to `B`: they stay in the graph but are in no root.
    pub forbidden: Vec<Edge>,
    /// Edges deleted alongside `uv`: their only 2-step connections ran
    /// through `uv`.
    pub deleted: Vec<Edge>,
}

/// Ordered log of reduction rounds. Replaying `edge` + `deleted` forward
/// from the original graph reproduces the reduced graph; re-adding each
/// `edge` in reverse turns a root of the residue into a root of the
/// original.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    pub events: Vec<ReductionEvent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeReduceOutcome {
    /// The instance has no solution.
    No,
    /// Equivalent instance with no recognizable edges, plus the trace.
    Reduced {
        instance: LabeledInstance,
        trace: ReductionTrace,
    },
}

fn edges_to(anchor: usize, others: &[usize]) -> Vec<Edge> {
    others.iter().map(|&w| Edge::new(anchor, w)).collect()
}

fn intersects(list: &[Edge], set: &BTreeSet<Edge>) -> bool {
    list.iter().any(|e| set.contains(e))
}

/// Runs the reduction loop to its fixpoint.
///
/// Every round strictly shrinks the edge set, so there are at most `m`
/// rounds; with the O(m n^2) recognizable-edge scan per round the loop runs
/// in O(n^2 m^2) overall. `No` is a semantic answer (the instance has no
/// solution), never a failure.
pub fn edge_reduce(inst: &LabeledInstance) -> EdgeReduceOutcome {
    // an edge both forced and forbidden can't be realized by any root
    if inst.forced.intersection(&inst.forbidden).next().is_some() {
        return EdgeReduceOutcome::No;
    }
    let mut g = inst.graph.clone();
    let mut r = inst.forced.clone();
    let mut b = inst.forbidden.clone();
    let mut events = Vec::new();

    while let Some((edge, part)) = find_recognizable_edge(&g) {
        if b.contains(&edge) {
            return EdgeReduceOutcome::No;
        }
        let (u, v) = (part.u, part.v);
        // private neighbors of u and v can't be root-adjacent to them
        let nv_closed = g.closed_neighborhood(v);
        let nu_closed = g.closed_neighborhood(u);
        let mut outside: Vec<Edge> = g
            .neighbors(u)
            .filter(|w| !nv_closed.contains(w))
            .map(|w| Edge::new(w, u))
            .collect();
        outside.extend(
            g.neighbors(v)
                .filter(|w| !nu_closed.contains(w))
                .map(|w| Edge::new(w, v)),
        );
        outside.sort_unstable();
        if intersects(&outside, &r) {
            return EdgeReduceOutcome::No;
        }

        let ux = edges_to(u, &part.x);
        let vy = edges_to(v, &part.y);
        let uy = edges_to(u, &part.y);
        let vx = edges_to(v, &part.x);
        let keep: Vec<Edge> = ux.iter().chain(&vy).copied().collect();
        let flip: Vec<Edge> = uy.iter().chain(&vx).copied().collect();

        let (branch, forced_now, deleted_now) = if !g.are_true_twins(u, v) {
            (TwinBranch::NonTwin, keep, flip)
        } else if intersects(&flip, &r) || intersects(&keep, &b) {
            // labels pin the flipped orientation
            (TwinBranch::TwinFlipped, flip, keep)
        } else {
            (TwinBranch::TwinDefault, keep, flip)
        };
        if intersects(&forced_now, &b) || intersects(&deleted_now, &r) {
            return EdgeReduceOutcome::No;
        }

        // uv leaves every future square along with the pairs whose only
        // 2-step connection ran through it; the outside edges stay but are
        // now known to be in no root
        g = g.without_edges(deleted_now.iter().chain(std::iter::once(&edge)));
        r.remove(&edge);
        r.extend(forced_now.iter().copied());
        for e in &deleted_now {
            b.remove(e);
        }
        b.extend(outside.iter().copied());

        events.push(ReductionEvent {
            edge,
            partition: part,
            branch,
            forced: forced_now,
            forbidden: outside,
            deleted: deleted_now,
        });
    }

    debug_assert!(r.iter().all(|e| g.contains(*e)));
    debug_assert!(b.iter().all(|e| g.contains(*e)));
    debug_assert!(r.intersection(&b).next().is_none());
    EdgeReduceOutcome::Reduced {
        instance: LabeledInstance {
            graph: g,
            forced: r,
            forbidden: b,
        },
        trace: ReductionTrace { events },
    }
}

/// Rebuilds a root of the original graph from a root of the reduced one by
/// re-adding each reduced edge in reverse order. The caller guarantees
/// `reduced_root` solves the reduced instance.
pub fn restore_solution(trace: &ReductionTrace, reduced_root: &Graph) -> Graph {
    let mut h = reduced_root.clone();
    for ev in trace.events.iter().rev() {
        assert!(
            ev.edge.v() < h.vertex_count(),
            "trace does not match the root's vertex set"
        );
        h = h.with_edges([ev.edge]);
    }
    h
}

/// A root `H` solves `(G, R, B)` when `H^2 = G`, `R ⊆ E_H` and
/// `B ∩ E_H = ∅`.
pub fn verify_solution(inst: &LabeledInstance, h: &Graph) -> bool {
    h.vertex_count() == inst.graph.vertex_count()
        && h.square() == inst.graph
        && inst.forced.iter().all(|e| h.contains(*e))
        && inst.forbidden.iter().all(|e| !h.contains(*e))
}

// ---------------------------------------------------------------------------
// trace text format: one event per line, 1-based vertex ids
// ---------------------------------------------------------------------------

fn fmt_verts(vs: &[usize]) -> String {
    if vs.is_empty() {
        return "-".into();
    }
    vs.iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_edges(es: &[Edge]) -> String {
    if es.is_empty() {
        return "-".into();
    }
    es.iter()
        .map(|e| format!("{}-{}", e.u() + 1, e.v() + 1))
        .collect::<Vec<_>>()
        .join(",")
}

impl ReductionTrace {
    /// One line per event:
    /// `uv <u> <v> branch <kind> X <verts> Y <verts> force <edges> forbid <edges> delete <edges>`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for ev in &self.events {
            out.push_str(&format!(
                "uv {} {} branch {} X {} Y {} force {} forbid {} delete {}\n",
                ev.partition.u + 1,
                ev.partition.v + 1,
                ev.branch,
                fmt_verts(&ev.partition.x),
                fmt_verts(&ev.partition.y),
                fmt_edges(&ev.forced),
                fmt_edges(&ev.forbidden),
                fmt_edges(&ev.deleted),
            ));
        }
        out
    }

    /// Parses the text format back. Errors carry the offending line number.
    pub fn from_text(text: &str) -> Result<ReductionTrace, String> {
        fn verts(tok: &str, line: usize) -> Result<Vec<usize>, String> {
            if tok == "-" {
                return Ok(Vec::new());
            }
            tok.split(',')
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .map(|v| v - 1)
                        .ok_or_else(|| format!("line {line}: bad vertex '{t}'"))
                })
                .collect()
        }
        fn edges(tok: &str, line: usize) -> Result<Vec<Edge>, String> {
            if tok == "-" {
                return Ok(Vec::new());
            }
            tok.split(',')
                .map(|t| {
                    let (a, b) = t
                        .split_once('-')
                        .ok_or_else(|| format!("line {line}: bad edge '{t}'"))?;
                    let pa = a
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| format!("line {line}: bad edge '{t}'"))?;
                    let pb = b
                        .parse::<usize>()
                        .ok()
                        .filter(|&v| v >= 1)
                        .ok_or_else(|| format!("line {line}: bad edge '{t}'"))?;
                    if pa == pb {
                        return Err(format!("line {line}: self-loop '{t}'"));
                    }
                    Ok(Edge::new(pa - 1, pb - 1))
                })
                .collect()
        }

        let mut events = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t: Vec<&str> = raw.split_whitespace().collect();
            if t.is_empty() {
                continue;
            }
            if t.len() != 15
                || t[0] != "uv"
                || t[3] != "branch"
                || t[5] != "X"
                || t[7] != "Y"
                || t[9] != "force"
                || t[11] != "forbid"
                || t[13] != "delete"
            {
                return Err(format!("line {line}: malformed trace event"));
            }
            let u = verts(t[1], line)?[0];
            let v = verts(t[2], line)?[0];
            let branch = match t[4] {
                "nontwin" => TwinBranch::NonTwin,
                "twin-flip" => TwinBranch::TwinFlipped,
                "twin-keep" => TwinBranch::TwinDefault,
                other => return Err(format!("line {line}: unknown branch '{other}'")),
            };
            events.push(ReductionEvent {
                edge: Edge::new(u, v),
                partition: UVPartition {
                    u,
                    v,
                    x: verts(t[6], line)?,
                    y: verts(t[8], line)?,
                },
                branch,
                forced: edges(t[10], line)?,
                forbidden: edges(t[12], line)?,
                deleted: edges(t[14], line)?,
            });
        }
        Ok(ReductionTrace { events })
    }
}
