//! Dynamic programming for labeled square-root instances over a tree
//! decomposition.
//!
//! A root is an edge subset `X` of the graph with: forced edges in,
//! forbidden edges out, every graph edge either chosen or witnessed by a
//! chosen 2-path, and the endpoints of any chosen 2-path adjacent in the
//! graph. Witness 2-paths `u–w–v` of a graph edge `uv` form triangles
//! `{u,v,w}`, and a tree decomposition holds every triangle inside some
//! bag, so coverage is decided bag-locally before both endpoints are
//! forgotten.
//!
//! Chosen 2-paths whose middle vertex survives a forget are the one
//! non-local constraint. Once a vertex `x` has a chosen edge to a
//! forgotten vertex `u`, any later-created chosen edge `x–t` would need
//! `ut` to be a graph edge; but `ut ∈ E_G` forces `u` and `t` to share a
//! bag below the forget, making the pair `x–t` exist there already. So
//! "later" chosen edges at `x` are exactly the illegal ones, and a single
//! closed flag per bag vertex enforces the rule; at joins, a vertex closed
//! on both sides certifies two forgotten root-neighbors that never shared
//! a bag, which is equally illegal.

use super::{validate_decomposition, TreeDecomposition};
use crate::graph::{Edge, Graph};
use crate::reduction::{verify_solution, LabeledInstance};
use std::collections::BTreeSet;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TwOutcome {
    Solution(Graph),
    No,
}

type Key = u64;

const IN: u8 = 0;
const OUT_PENDING: u8 = 1;
const OUT_SAT: u8 = 2;

enum NiceKind {
    Leaf,
    Introduce { v: usize, child: usize },
    Forget { v: usize, child: usize },
    Join { left: usize, right: usize },
}

struct NiceNode {
    kind: NiceKind,
    bag: Vec<usize>,
}

fn build_nice(td: &TreeDecomposition) -> Vec<NiceNode> {
    let nodes = td.bags.len();
    let mut adj = vec![Vec::new(); nodes];
    for &(a, b) in &td.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for nbrs in &mut adj {
        nbrs.sort_unstable();
    }
    let mut nice: Vec<NiceNode> = Vec::new();

    fn leaf_chain(nice: &mut Vec<NiceNode>, target: &[usize]) -> usize {
        nice.push(NiceNode {
            kind: NiceKind::Leaf,
            bag: Vec::new(),
        });
        let mut cur = nice.len() - 1;
        let mut bag = Vec::new();
        for &v in target {
            bag.push(v);
            bag.sort_unstable();
            nice.push(NiceNode {
                kind: NiceKind::Introduce { v, child: cur },
                bag: bag.clone(),
            });
            cur = nice.len() - 1;
        }
        cur
    }

    /// Morphs the nice node `cur` (whose bag is `from`) into `target` by
    /// forgetting the surplus and introducing the missing vertices.
    fn morph(nice: &mut Vec<NiceNode>, mut cur: usize, target: &[usize]) -> usize {
        let mut bag = nice[cur].bag.clone();
        let surplus: Vec<usize> = bag
            .iter()
            .copied()
            .filter(|v| target.binary_search(v).is_err())
            .collect();
        for v in surplus {
            bag.retain(|&x| x != v);
            nice.push(NiceNode {
                kind: NiceKind::Forget { v, child: cur },
                bag: bag.clone(),
            });
            cur = nice.len() - 1;
        }
        let missing: Vec<usize> = target
            .iter()
            .copied()
            .filter(|v| bag.binary_search(v).is_err())
            .collect();
        for v in missing {
            bag.push(v);
            bag.sort_unstable();
            nice.push(NiceNode {
                kind: NiceKind::Introduce { v, child: cur },
                bag: bag.clone(),
            });
            cur = nice.len() - 1;
        }
        cur
    }

    fn rec(
        node: usize,
        parent: usize,
        td: &TreeDecomposition,
        adj: &[Vec<usize>],
        nice: &mut Vec<NiceNode>,
    ) -> usize {
        let target = &td.bags[node];
        let children: Vec<usize> = adj[node]
            .iter()
            .copied()
            .filter(|&c| c != parent)
            .collect();
        if children.is_empty() {
            return leaf_chain(nice, target);
        }
        let mut acc: Option<usize> = None;
        for c in children {
            let sub = rec(c, node, td, adj, nice);
            let shaped = morph(nice, sub, target);
            acc = Some(match acc {
                None => shaped,
                Some(prev) => {
                    nice.push(NiceNode {
                        kind: NiceKind::Join {
                            left: prev,
                            right: shaped,
                        },
                        bag: target.clone(),
                    });
                    nice.len() - 1
                }
            });
        }
        acc.unwrap()
    }

    let top = rec(0, usize::MAX, td, &adj, &mut nice);
    // forget everything above the root bag so the final table is trivial
    morph(&mut nice, top, &[]);
    nice
}

/// Pairs of bag positions carrying a graph edge, in lexicographic order.
fn bag_pairs(g: &Graph, bag: &[usize]) -> Vec<(usize, usize)> {
    let s = bag.len();
    let mut pairs = Vec::new();
    for i in 0..s {
        for j in i + 1..s {
            if g.has_edge(bag[i], bag[j]) {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn encode(statuses: &[u8], closed: u32) -> Key {
    let mut k: Key = 0;
    for (i, &s) in statuses.iter().enumerate() {
        k |= (s as Key) << (2 * i);
    }
    k | (closed as Key) << (2 * statuses.len())
}

fn decode(key: Key, npairs: usize, s: usize) -> (Vec<u8>, u32) {
    let statuses = (0..npairs).map(|i| (key >> (2 * i) & 3) as u8).collect();
    let closed = (key >> (2 * npairs)) as u32 & ((1u32 << s) - 1);
    (statuses, closed)
}

#[derive(Clone)]
enum Prov {
    Leaf,
    Intro { parent: Key, added: Vec<Edge> },
    Forget { parent: Key },
    Join { left: Key, right: Key },
}

/// Sorted-by-key table; first writer of a key wins deterministically.
struct Table {
    entries: Vec<(Key, Prov)>,
}

impl Table {
    fn from_raw(mut raw: Vec<(Key, Prov)>) -> Table {
        raw.sort_by_key(|e| e.0); // stable: earliest generation survives dedup
        raw.dedup_by_key(|e| e.0);
        Table { entries: raw }
    }

    fn lookup(&self, key: Key) -> Option<&Prov> {
        self.entries
            .binary_search_by_key(&key, |e| e.0)
            .ok()
            .map(|i| &self.entries[i].1)
    }
}

/// Solves the labeled instance over the supplied decomposition, which must
/// be valid for the instance's graph. Returns a witness root or a proven
/// `No`. Bags may hold at most 8 vertices (state keys are 64-bit).
pub fn solve_labeled_tw(inst: &LabeledInstance, td: &TreeDecomposition) -> TwOutcome {
    let g = &inst.graph;
    assert!(
        validate_decomposition(g, td),
        "solve_labeled_tw needs a valid tree decomposition"
    );
    assert!(
        td.bags.iter().all(|b| b.len() <= 8),
        "bags over 8 vertices exceed the 64-bit state encoding"
    );
    if inst.forced.intersection(&inst.forbidden).next().is_some() {
        return TwOutcome::No;
    }

    let nice = build_nice(td);
    let mut tables: Vec<Table> = Vec::with_capacity(nice.len());

    for node in &nice {
        let bag = &node.bag;
        let pairs = bag_pairs(g, bag);
        let table = match &node.kind {
            NiceKind::Leaf => Table {
                entries: vec![(0, Prov::Leaf)],
            },
            NiceKind::Introduce { v, child } => {
                let cnode = &nice[*child];
                let cpairs = bag_pairs(g, &cnode.bag);
                introduce(inst, &tables[*child], &cnode.bag, &cpairs, bag, &pairs, *v)
            }
            NiceKind::Forget { v, child } => {
                let cnode = &nice[*child];
                let cpairs = bag_pairs(g, &cnode.bag);
                forget(&tables[*child], &cnode.bag, &cpairs, &pairs, *v)
            }
            NiceKind::Join { left, right } => {
                join(&tables[*left], &tables[*right], bag, &pairs)
            }
        };
        tables.push(table);
    }

    let root = tables.len() - 1;
    if tables[root].lookup(0).is_none() {
        return TwOutcome::No;
    }

    let mut chosen: BTreeSet<Edge> = BTreeSet::new();
    collect(&nice, &tables, root, 0, &mut chosen);
    let h = Graph::from_edges(g.vertex_count(), chosen.iter().map(|e| e.endpoints()));
    debug_assert!(verify_solution(inst, &h));
    TwOutcome::Solution(h)
}

fn introduce(
    inst: &LabeledInstance,
    ctable: &Table,
    cbag: &[usize],
    cpairs: &[(usize, usize)],
    bag: &[usize],
    pairs: &[(usize, usize)],
    v: usize,
) -> Table {
    let g = &inst.graph;
    let s = bag.len();
    let p = bag.binary_search(&v).expect("introduced vertex is in the bag");
    let shift = |q: usize| q + usize::from(q >= p);

    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
    // child pair slot -> new pair slot
    let remap: Vec<usize> = cpairs
        .iter()
        .map(|&(i, j)| pair_index[&(shift(i), shift(j))])
        .collect();
    // new pairs touching v, as (pair slot, other position)
    let fresh: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| i == p || j == p)
        .map(|(slot, &(i, j))| (slot, if i == p { j } else { i }))
        .collect();
    let fresh_edges: Vec<Edge> = fresh.iter().map(|&(_, q)| Edge::new(v, bag[q])).collect();
    let must_in: Vec<bool> = fresh_edges.iter().map(|e| inst.forced.contains(e)).collect();
    let must_out: Vec<bool> = fresh_edges
        .iter()
        .map(|e| inst.forbidden.contains(e))
        .collect();

    let mut raw = Vec::new();
    for &(ckey, _) in &ctable.entries {
        let (cstat, cclosed) = decode(ckey, cpairs.len(), cbag.len());
        let mut base = vec![0u8; pairs.len()];
        for (ci, &ni) in remap.iter().enumerate() {
            base[ni] = cstat[ci];
        }
        let mut closed: u32 = 0;
        for q in 0..cbag.len() {
            if cclosed >> q & 1 == 1 {
                closed |= 1 << shift(q);
            }
        }

        'assign: for mask in 0u32..(1 << fresh.len()) {
            let mut statuses = base.clone();
            let mut added: Vec<Edge> = Vec::new();
            for (fi, &(slot, q)) in fresh.iter().enumerate() {
                let choose_in = mask >> fi & 1 == 1;
                if (choose_in && must_out[fi]) || (!choose_in && must_in[fi]) {
                    continue 'assign;
                }
                if choose_in {
                    // a chosen edge at a closed endpoint breaks the 2-path rule
                    if closed >> q & 1 == 1 {
                        continue 'assign;
                    }
                    statuses[slot] = IN;
                    added.push(Edge::new(v, bag[q]));
                } else {
                    statuses[slot] = OUT_PENDING;
                }
            }
            // chosen 2-paths through v: both far ends must be adjacent
            let chosen: Vec<usize> = fresh
                .iter()
                .enumerate()
                .filter(|(fi, _)| mask >> fi & 1 == 1)
                .map(|(_, &(_, q))| q)
                .collect();
            for (a, &qa) in chosen.iter().enumerate() {
                for &qb in &chosen[a + 1..] {
                    if !g.has_edge(bag[qa], bag[qb]) {
                        continue 'assign;
                    }
                }
            }
            // chosen 2-paths through a far end: v vs the older partner
            for &qa in &chosen {
                for (slot, &(i, j)) in pairs.iter().enumerate() {
                    if statuses[slot] != IN || i == p || j == p {
                        continue;
                    }
                    let other = if i == qa {
                        j
                    } else if j == qa {
                        i
                    } else {
                        continue;
                    };
                    if !g.has_edge(v, bag[other]) {
                        continue 'assign;
                    }
                }
            }
            // coverage: fresh out-pairs may already have a witness, and v
            // may witness older pending pairs
            for &(slot, q) in &fresh {
                if statuses[slot] != OUT_PENDING {
                    continue;
                }
                let witnessed = chosen.iter().any(|&w| {
                    w != q
                        && pair_index
                            .get(&(w.min(q), w.max(q)))
                            .is_some_and(|&ws| statuses[ws] == IN)
                });
                if witnessed {
                    statuses[slot] = OUT_SAT;
                }
            }
            for (slot, &(i, j)) in pairs.iter().enumerate() {
                if statuses[slot] == OUT_PENDING && i != p && j != p {
                    let via_v = chosen.contains(&i) && chosen.contains(&j);
                    if via_v {
                        statuses[slot] = OUT_SAT;
                    }
                }
            }
            debug_assert!(2 * pairs.len() + s <= 64);
            raw.push((
                encode(&statuses, closed),
                Prov::Intro {
                    parent: ckey,
                    added,
                },
            ));
        }
    }
    Table::from_raw(raw)
}

fn forget(
    ctable: &Table,
    cbag: &[usize],
    cpairs: &[(usize, usize)],
    pairs: &[(usize, usize)],
    v: usize,
) -> Table {
    let p = cbag.binary_search(&v).expect("forgotten vertex was in the bag");
    let unshift = |q: usize| q - usize::from(q > p);
    let pair_index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();

    let mut raw = Vec::new();
    'state: for &(ckey, _) in &ctable.entries {
        let (cstat, cclosed) = decode(ckey, cpairs.len(), cbag.len());
        let mut statuses = vec![0u8; pairs.len()];
        let mut closed: u32 = cclosed & !(1 << p);
        for (ci, &(i, j)) in cpairs.iter().enumerate() {
            if i == p || j == p {
                match cstat[ci] {
                    IN => {
                        // the partner keeps a chosen edge to a forgotten vertex
                        let q = if i == p { j } else { i };
                        closed |= 1 << q;
                    }
                    OUT_SAT => {}
                    _ => continue 'state, // an uncovered edge dies here
                }
            } else {
                statuses[pair_index[&(unshift(i), unshift(j))]] = cstat[ci];
            }
        }
        // drop position p from the closed bitmask
        let low = closed & ((1u32 << p) - 1);
        let high = closed >> (p + 1);
        let packed = low | high << p;
        raw.push((encode(&statuses, packed), Prov::Forget { parent: ckey }));
    }
    Table::from_raw(raw)
}

fn join(ltable: &Table, rtable: &Table, bag: &[usize], pairs: &[(usize, usize)]) -> Table {
    let in_mask = |key: Key| -> u64 {
        let mut m = 0u64;
        for i in 0..pairs.len() {
            if key >> (2 * i) & 3 == IN as Key {
                m |= 1 << i;
            }
        }
        m
    };
    let mut right_by_mask: HashMap<u64, Vec<Key>> = HashMap::new();
    for &(rkey, _) in &rtable.entries {
        right_by_mask.entry(in_mask(rkey)).or_default().push(rkey);
    }

    let mut raw = Vec::new();
    for &(lkey, _) in &ltable.entries {
        let (lstat, lclosed) = decode(lkey, pairs.len(), bag.len());
        let Some(rights) = right_by_mask.get(&in_mask(lkey)) else {
            continue;
        };
        for &rkey in rights {
            let (rstat, rclosed) = decode(rkey, pairs.len(), bag.len());
            // closed on both sides means chosen edges to forgotten vertices
            // in both subtrees, which never share a bag
            if lclosed & rclosed != 0 {
                continue;
            }
            let statuses: Vec<u8> = lstat
                .iter()
                .zip(&rstat)
                .map(|(&a, &b)| if a == IN { IN } else { a.max(b) })
                .collect();
            raw.push((
                encode(&statuses, lclosed | rclosed),
                Prov::Join {
                    left: lkey,
                    right: rkey,
                },
            ));
        }
    }
    Table::from_raw(raw)
}

fn collect(nice: &[NiceNode], tables: &[Table], node: usize, key: Key, acc: &mut BTreeSet<Edge>) {
    match tables[node].lookup(key).expect("provenance chain is intact") {
        Prov::Leaf => {}
        Prov::Intro { parent, added } => {
            acc.extend(added.iter().copied());
            let NiceKind::Introduce { child, .. } = &nice[node].kind else {
                unreachable!()
            };
            collect(nice, tables, *child, *parent, acc);
        }
        Prov::Forget { parent } => {
            let NiceKind::Forget { child, .. } = &nice[node].kind else {
                unreachable!()
            };
            collect(nice, tables, *child, *parent, acc);
        }
        Prov::Join { left, right } => {
            let NiceKind::Join {
                left: ln,
                right: rn,
            } = &nice[node].kind
            else {
                unreachable!()
            };
            collect(nice, tables, *ln, *left, acc);
            collect(nice, tables, *rn, *right, acc);
        }
    }
}
