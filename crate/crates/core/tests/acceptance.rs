//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use num_rational::Rational64;
use sqroot::kernelizer::{component_reduce, ComponentOutcome};
use sqroot::oracle::{enumerate_roots, small_graphs, small_graphs_max_degree, solve_labeled, SearchLimits, SolveOutcome};
use sqroot::twsolver::{max_average_degree, max_average_degree_flow};
use sqroot::{
    edge_reduce, find_recognizable_edge, generate_apex_square, generate_hkt_root,
    hkt_planar_square_check, kernelize, mad_solve, mad_threshold, restore_solution,
    solve_labeled_tw, treewidth_at_most, verify_solution, EdgeReduceOutcome, Graph, KernelOutcome,
    LabeledInstance, MadOutcome, TreeDecomposition, TwOutcome, KERNEL_VERTEX_FACTOR,
};
use std::time::Instant;

fn report(id: u32, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {id:2} ({name}): {verdict} | {detail}");
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
}

fn oracle_unlimited(inst: &LabeledInstance) -> SolveOutcome {
    solve_labeled(inst, SearchLimits::unlimited()).outcome
}

fn full_corpus() -> Vec<Graph> {
    (1..=7).flat_map(small_graphs).collect()
}

#[test]
fn criterion_01_oracle_completeness() {
    let start = Instant::now();
    let level7 = small_graphs(7);
    assert_eq!(level7.len(), 1044, "the 7-vertex corpus layer");
    let corpus = full_corpus();
    let limits = SearchLimits::unlimited();
    let mut mismatches = 0;
    for g in &corpus {
        let inst = LabeledInstance::unlabeled(g.clone());
        let solved = match solve_labeled(&inst, limits).outcome {
            SolveOutcome::Solution(h) => {
                assert!(verify_solution(&inst, &h));
                true
            }
            SolveOutcome::No => false,
            SolveOutcome::Timeout => panic!("unlimited search timed out on {g:?}"),
        };
        let roots = enumerate_roots(g, 4, limits);
        let nonempty = !roots.roots.is_empty();
        if solved != nonempty || (!nonempty && !roots.complete) {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "oracle completeness",
        mismatches == 0 && secs < 60.0,
        &format!(
            "{} graphs (1044 at n=7), {mismatches} mismatches, {secs:.1}s (< 60s)",
            corpus.len()
        ),
    );
}

#[test]
fn criterion_02_edge_reduction_equivalence() {
    let sample = common::labeled_sample(7);
    assert!(sample.len() >= 10_000, "need at least 10k instances, got {}", sample.len());
    let limits = SearchLimits::unlimited();
    let mut failures = 0;
    for inst in &sample {
        let direct = matches!(
            solve_labeled(inst, limits).outcome,
            SolveOutcome::Solution(_)
        );
        let via_reduction = match edge_reduce(inst) {
            EdgeReduceOutcome::No => false,
            EdgeReduceOutcome::Reduced { instance, trace } => {
                match component_reduce(&instance, &oracle_unlimited, 1).unwrap() {
                    ComponentOutcome::No => false,
                    ComponentOutcome::Reduced(r) => {
                        assert_eq!(
                            r.residual.graph.vertex_count(),
                            0,
                            "components of 7-vertex graphs always dissolve"
                        );
                        let edges = r
                            .solved
                            .iter()
                            .flat_map(|c| c.root_edges.iter().map(|e| e.endpoints()));
                        let reduced_root =
                            Graph::from_edges(instance.graph.vertex_count(), edges);
                        let restored = restore_solution(&trace, &reduced_root);
                        if !verify_solution(inst, &restored) {
                            failures += 1;
                        }
                        true
                    }
                }
            }
        };
        if direct != via_reduction {
            failures += 1;
        }
    }
    report(
        2,
        "edge reduction equivalence",
        failures == 0,
        &format!("{} labeled instances, {failures} failures", sample.len()),
    );
}

#[test]
fn criterion_03_reduction_fixpoint() {
    let mut outputs = 0;
    let mut bad = 0;
    let mut check = |inst: &LabeledInstance| {
        if let EdgeReduceOutcome::Reduced { instance, .. } = edge_reduce(inst) {
            outputs += 1;
            if find_recognizable_edge(&instance.graph).is_some() {
                bad += 1;
            }
        }
    };
    for g in full_corpus() {
        check(&LabeledInstance::unlabeled(g));
    }
    for seed in 0..100 {
        let sq = generate_hkt_root(seed, 20).square();
        check(&LabeledInstance::unlabeled(sq));
    }
    report(
        3,
        "fixpoint",
        bad == 0 && outputs > 1000,
        &format!("{outputs} reduced outputs, {bad} with a recognizable edge left"),
    );
}

#[test]
fn criterion_04_reduced_planar_components_are_small() {
    let mut oversized = 0;
    let mut reduced_count = 0;
    for seed in 0..1000u64 {
        let size = 8 + (seed as usize * 7919) % 53; // 8..=60
        let root = generate_hkt_root(seed, size);
        let inst = LabeledInstance::unlabeled(root.square());
        match edge_reduce(&inst) {
            EdgeReduceOutcome::No => panic!("squares always have a root"),
            EdgeReduceOutcome::Reduced { instance, .. } => {
                reduced_count += 1;
                let biggest = instance
                    .graph
                    .connected_components()
                    .into_iter()
                    .map(|c| c.len())
                    .max()
                    .unwrap_or(0);
                if biggest > 12 {
                    oversized += 1;
                }
            }
        }
    }
    report(
        4,
        "planar residues split small",
        oversized == 0 && reduced_count == 1000,
        &format!("{reduced_count} roots up to 60 vertices, {oversized} residues over 12"),
    );
}

#[test]
fn criterion_05_kernel_bound_and_oracle_match() {
    let budget = SearchLimits::default();
    let oracle = |inst: &LabeledInstance| solve_labeled(inst, budget).outcome;
    let mut oversize = 0;
    let mut mismatches = 0;
    let mut small_checked = 0;
    for seed in 0..200u64 {
        let k = (seed % 4) as usize;
        let root_size = 4 + (seed as usize % 20); // 4..=23
        let gen = generate_apex_square(seed, k, root_size);
        let inst = LabeledInstance::unlabeled(gen.square.clone());
        let outcome = kernelize(&inst, k, &oracle, 1).expect("budget suffices at this scale");
        let answer = match &outcome {
            KernelOutcome::Yes(witness) => {
                if let Some(w) = witness {
                    assert!(verify_solution(&inst, w));
                }
                true
            }
            KernelOutcome::No => false,
            KernelOutcome::Kernel(bundle) => {
                let kn = bundle.instance.graph.vertex_count();
                if kn > KERNEL_VERTEX_FACTOR * k {
                    oversize += 1;
                }
                match oracle_unlimited(&bundle.instance) {
                    SolveOutcome::Solution(h) => {
                        let lifted = bundle.lift(&h);
                        assert!(verify_solution(&inst, &lifted));
                        true
                    }
                    SolveOutcome::No => false,
                    SolveOutcome::Timeout => unreachable!(),
                }
            }
        };
        if gen.square.vertex_count() <= 14 {
            small_checked += 1;
            let direct = matches!(oracle_unlimited(&inst), SolveOutcome::Solution(_));
            if direct != answer {
                mismatches += 1;
            }
        }
    }
    report(
        5,
        "kernel size and soundness",
        oversize == 0 && mismatches == 0 && small_checked >= 30,
        &format!(
            "200 generated instances, {oversize} oversized kernels, {mismatches} oracle mismatches ({small_checked} small instances cross-checked)"
        ),
    );
}

#[test]
fn criterion_06_hkt_equals_planarity_of_square() {
    let mut mismatches = 0;
    let mut total = 0;
    for n in 1..=8 {
        for h in small_graphs_max_degree(n, 3) {
            if !h.is_connected() {
                continue;
            }
            total += 1;
            if hkt_planar_square_check(&h) != common::is_planar(&h.square()) {
                mismatches += 1;
            }
        }
    }
    report(
        6,
        "planar-square characterization",
        mismatches == 0 && total > 300,
        &format!("{total} connected subcubic roots up to 8 vertices, {mismatches} mismatches"),
    );
}

#[test]
fn criterion_07_mad_exactness() {
    // independent subset enumeration, written against the definition
    fn reference_mad(g: &Graph) -> Rational64 {
        let n = g.vertex_count();
        let mut best = Rational64::new(0, 1);
        for mask in 1u32..(1 << n) {
            let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let mut inner = 0i64;
            for (i, &a) in verts.iter().enumerate() {
                for &b in &verts[i + 1..] {
                    if g.has_edge(a, b) {
                        inner += 1;
                    }
                }
            }
            let cand = Rational64::new(2 * inner, verts.len() as i64);
            if cand > best {
                best = cand;
            }
        }
        best
    }

    let mut graphs: Vec<Graph> = full_corpus();
    use rand::Rng as _;
    use rand::SeedableRng as _;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40_417);
    for _ in 0..60 {
        let n = rng.random_range(8..=12usize);
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_range(0..100u32) < 35 {
                    edges.push((u, v));
                }
            }
        }
        graphs.push(Graph::from_edges(n, edges));
    }
    graphs.push(Graph::cycle(12).square());
    graphs.push(Graph::complete(12));

    let mut mismatches = 0;
    for g in &graphs {
        let expect = reference_mad(g);
        if max_average_degree(g) != expect || max_average_degree_flow(g) != expect {
            mismatches += 1;
        }
    }
    report(
        7,
        "exact maximum average degree",
        mismatches == 0,
        &format!("{} graphs up to 12 vertices, {mismatches} inequalities", graphs.len()),
    );
}

#[test]
fn criterion_08_sparse_graphs_reduce_to_width_5() {
    let limits = SearchLimits::unlimited();
    let mut with_roots = 0;
    let mut width_failures = 0;
    let mut degree_failures = 0;
    for g in full_corpus() {
        if max_average_degree(&g) >= mad_threshold() {
            continue;
        }
        let roots = enumerate_roots(&g, 512, limits);
        assert!(roots.complete, "enumeration capped on {g:?}");
        if roots.roots.is_empty() {
            continue;
        }
        with_roots += 1;
        for h in &roots.roots {
            if h.max_degree() > 4 {
                degree_failures += 1;
            }
        }
        match edge_reduce(&LabeledInstance::unlabeled(g.clone())) {
            EdgeReduceOutcome::No => panic!("{g:?} has a root"),
            EdgeReduceOutcome::Reduced { instance, .. } => {
                if treewidth_at_most(&instance.graph, 5).is_none() {
                    width_failures += 1;
                }
            }
        }
    }
    report(
        8,
        "low density forces treewidth 5",
        width_failures == 0 && degree_failures == 0 && with_roots > 50,
        &format!(
            "{with_roots} sparse graphs with roots, {width_failures} width failures, {degree_failures} roots over degree 4"
        ),
    );
}

#[test]
fn criterion_09_decomposition_dp_matches_oracle() {
    let sample = common::labeled_sample(7);
    let limits = SearchLimits::unlimited();
    let mut mismatches = 0;
    let mut cached: Option<(Graph, TreeDecomposition)> = None;
    for inst in &sample {
        let td = match &cached {
            Some((g, td)) if *g == inst.graph => td.clone(),
            _ => {
                let td = (0..inst.graph.vertex_count())
                    .find_map(|k| treewidth_at_most(&inst.graph, k))
                    .unwrap_or_else(|| TreeDecomposition::trivial(&inst.graph));
                cached = Some((inst.graph.clone(), td.clone()));
                td
            }
        };
        let direct = matches!(
            solve_labeled(inst, limits).outcome,
            SolveOutcome::Solution(_)
        );
        let via_dp = match solve_labeled_tw(inst, &td) {
            TwOutcome::Solution(h) => {
                if !verify_solution(inst, &h) {
                    mismatches += 1;
                }
                true
            }
            TwOutcome::No => false,
        };
        if direct != via_dp {
            mismatches += 1;
        }
    }
    report(
        9,
        "decomposition dp equivalence",
        mismatches == 0,
        &format!("{} labeled instances, {mismatches} mismatches", sample.len()),
    );
}

#[test]
fn criterion_10_runtime_shapes() {
    // edge reduction on 200-vertex squares
    let mut worst_reduce = 0.0f64;
    for seed in 500..503u64 {
        let root = generate_hkt_root(seed, 200);
        assert!(root.vertex_count() >= 190, "generator reached size");
        let sq = root.square();
        let t = Instant::now();
        let out = edge_reduce(&LabeledInstance::unlabeled(sq));
        let secs = t.elapsed().as_secs_f64();
        worst_reduce = worst_reduce.max(secs);
        assert!(matches!(out, EdgeReduceOutcome::Reduced { .. }));
        assert!(secs < 10.0, "edge_reduce took {secs:.1}s");
    }

    // the full low-density pipeline on squares of long cycles
    let mut worst_mad = 0.0f64;
    for n in [10usize, 25, 50, 100, 200] {
        let g = Graph::cycle(n).square();
        let t = Instant::now();
        match mad_solve(&g) {
            MadOutcome::Solution(h) => assert_eq!(h.square(), g),
            other => panic!("square of C{n} must solve, got {other:?}"),
        }
        let secs = t.elapsed().as_secs_f64();
        worst_mad = worst_mad.max(secs);
        assert!(secs < 60.0, "mad_solve on C{n}^2 took {secs:.1}s");
    }
    report(
        10,
        "runtime sanity",
        true,
        &format!(
            "edge_reduce on 200-vertex squares worst {worst_reduce:.2}s (< 10s); mad_solve up to C200^2 worst {worst_mad:.2}s (< 60s)"
        ),
    );
}
