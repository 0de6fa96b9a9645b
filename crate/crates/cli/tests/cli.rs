//! End-to-end tests of the binary: exit codes, output formats, and the
//! reduce/solve/restore pipeline over real files.

use sqroot_cli::format;
use std::path::Path;
use std::process::{Command, Output};

fn sqroot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sqroot"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

const K3: &str = "p sqroot 3 3\ne 1 2\ne 2 3\ne 1 3\n";
const C4: &str = "p sqroot 4 4\ne 1 2\ne 2 3\ne 3 4\ne 1 4\n";
const K4: &str = "p sqroot 4 6\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4\n";

fn c7_square() -> String {
    format::print_graph(&sqroot::Graph::cycle(7).square())
}

#[test]
fn solve_k3_says_yes() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k3.sqr", K3);
    let out = sqroot(&["solve", &file]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("YES\n"), "{text}");
    let edges = text.lines().filter(|l| l.starts_with("e ")).count();
    assert!(edges == 2 || edges == 3, "roots of K3 have 2 or 3 edges");
}

#[test]
fn solve_c4_says_no() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "c4.sqr", C4);
    let out = sqroot(&["solve", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "NO\n");
}

#[test]
fn solve_respects_labels() {
    let dir = tempfile::tempdir().unwrap();
    let labeled = format!("{K3}r 1 2\nr 2 3\nb 1 3\n");
    let file = write(dir.path(), "k3l.sqr", &labeled);
    let out = sqroot(&["solve", &file]);
    let text = stdout(&out);
    assert!(text.contains("YES"));
    assert!(text.contains("e 1 2\n") && text.contains("e 2 3\n"));
    assert!(!text.contains("e 1 3"));
}

#[test]
fn tiny_budget_times_out_with_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let g = sqroot::Graph::complete(8);
    let file = write(dir.path(), "k8.sqr", &format::print_graph(&g));
    let out = sqroot(&["solve", &file, "--budget", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout(&out), "TIMEOUT\n");
}

#[test]
fn tw_engine_agrees_on_both_answers() {
    let dir = tempfile::tempdir().unwrap();
    let yes = write(dir.path(), "c7sq.sqr", &c7_square());
    let out = sqroot(&["solve", &yes, "--engine", "tw"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("YES\n"));
    let no = write(dir.path(), "c4.sqr", C4);
    let out = sqroot(&["solve", &no, "--engine", "tw"]);
    assert_eq!(stdout(&out), "NO\n");
}

#[test]
fn malformed_files_exit_3_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "bad.sqr", "p sqroot 3 1\ne 1 9\n");
    let out = sqroot(&["solve", &file]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("column 5"), "{err}");
}

#[test]
fn square_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let c7 = format::print_graph(&sqroot::Graph::cycle(7));
    let file = write(dir.path(), "c7.sqr", &c7);
    let out = sqroot(&["square", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), c7_square());
}

#[test]
fn mad_prints_exact_fractions() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k4.sqr", K4);
    let out = sqroot(&["mad", &file]);
    assert_eq!(stdout(&out), "3/1\n");
    let c7sq = write(dir.path(), "c7sq.sqr", &c7_square());
    assert_eq!(stdout(&sqroot(&["mad", &c7sq])), "4/1\n");
}

#[test]
fn treewidth_reports_decomposition_or_bound() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k4.sqr", K4);
    let out = sqroot(&["treewidth", &file, "--k", "3"]);
    let text = stdout(&out);
    assert!(text.starts_with("s td "), "{text}");
    let out = sqroot(&["treewidth", &file, "--k", "2"]);
    assert_eq!(stdout(&out), ">2\n");
}

#[test]
fn check_hkt_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let c8 = format::print_graph(&sqroot::Graph::cycle(8));
    let file = write(dir.path(), "c8.sqr", &c8);
    assert_eq!(stdout(&sqroot(&["check-hkt", &file])), "PLANAR-SQUARE\n");
    let c5 = format::print_graph(&sqroot::Graph::cycle(5));
    let file = write(dir.path(), "c5.sqr", &c5);
    assert_eq!(stdout(&sqroot(&["check-hkt", &file])), "NOT\n");
}

#[test]
fn enumerate_lists_k3_roots() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k3.sqr", K3);
    let out = sqroot(&["enumerate", &file]);
    let text = stdout(&out);
    assert!(text.starts_with("ROOTS 4 COMPLETE\n"), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("root ")).count(), 4);
}

#[test]
fn generate_is_deterministic_and_valid() {
    let a = stdout(&sqroot(&["generate", "--kind", "hkt-root", "--seed", "9", "--size", "30"]));
    let b = stdout(&sqroot(&["generate", "--kind", "hkt-root", "--seed", "9", "--size", "30"]));
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "gen.sqr", &a);
    assert_eq!(stdout(&sqroot(&["check-hkt", &file])), "PLANAR-SQUARE\n");

    let sq = stdout(&sqroot(&[
        "generate", "--kind", "apex-square", "--seed", "4", "--size", "10", "--k", "2",
    ]));
    assert!(sq.contains("c kind=apex-square seed=4 size=10 k=2\n"));
}

#[test]
fn kernelize_solves_generated_squares() {
    let dir = tempfile::tempdir().unwrap();
    let sq = stdout(&sqroot(&[
        "generate", "--kind", "apex-square", "--seed", "12", "--size", "12", "--k", "1",
    ]));
    let file = write(dir.path(), "apex.sqr", &sq);
    let out = sqroot(&["kernelize", &file, "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("YES\n") || stdout(&out).starts_with("KERNEL\n"));
}

#[test]
fn reduce_solve_restore_pipeline_reproduces_a_root() {
    let dir = tempfile::tempdir().unwrap();
    let square_file = write(dir.path(), "c7sq.sqr", &c7_square());
    let trace_file = dir.path().join("trace.txt");
    let reduced_file = dir.path().join("reduced.sqr");
    let root_file = dir.path().join("root.sqr");

    let out = sqroot(&[
        "reduce",
        &square_file,
        "--emit-trace",
        trace_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    std::fs::write(&reduced_file, stdout(&out)).unwrap();

    let out = sqroot(&[
        "solve",
        reduced_file.to_str().unwrap(),
        "--emit-root",
        root_file.to_str().unwrap(),
    ]);
    assert!(stdout(&out).starts_with("YES\n"));

    let out = sqroot(&[
        "restore",
        root_file.to_str().unwrap(),
        "--trace",
        trace_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let restored = format::parse_instance(&stdout(&out)).unwrap();
    // the unique labeled root of the square of C7 is C7 itself
    assert_eq!(restored.graph, sqroot::Graph::cycle(7));

    // the restored root solves the original instance in-process
    let original = format::parse_instance(&c7_square()).unwrap();
    assert!(sqroot::verify_solution(&original, &restored.graph));
}

#[test]
fn single_vertex_solves_trivially() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k1.sqr", "p sqroot 1 0\n");
    let out = sqroot(&["solve", &file]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "YES\n");
}

#[test]
fn tw_engine_respects_labels() {
    let dir = tempfile::tempdir().unwrap();
    let labeled = format!("{K3}r 1 2\nr 2 3\nb 1 3\n");
    let file = write(dir.path(), "k3l.sqr", &labeled);
    let out = sqroot(&["solve", &file, "--engine", "tw"]);
    let text = stdout(&out);
    assert!(text.contains("YES"));
    assert!(text.contains("e 1 2\n") && text.contains("e 2 3\n"));
    assert!(!text.contains("e 1 3"));
}

#[test]
fn kernelize_emits_kernel_with_vertex_map() {
    // K13 survives reduction whole; with a generous k it ships as a kernel
    let dir = tempfile::tempdir().unwrap();
    let k13 = format::print_graph(&sqroot::Graph::complete(13));
    let file = write(dir.path(), "k13.sqr", &k13);
    let out = sqroot(&["kernelize", &file, "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("KERNEL\n"), "{text}");
    assert!(text.contains("p sqroot 13 78\n"));
    assert!(text.contains("c map 1 1\n"));
    // with k = 0 the size cutoff proves there is no root
    let out = sqroot(&["kernelize", &file, "--k", "0"]);
    assert_eq!(stdout(&out), "NO\n");
}

#[test]
fn enumerate_budget_exhaustion_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let k8 = format::print_graph(&sqroot::Graph::complete(8));
    let file = write(dir.path(), "k8.sqr", &k8);
    let out = sqroot(&["enumerate", &file, "--cap", "100000", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).lines().next().unwrap().ends_with("BUDGET"));
}

#[test]
fn restore_rejects_garbage_and_mismatched_traces() {
    let dir = tempfile::tempdir().unwrap();
    let root = write(dir.path(), "root.sqr", "p sqroot 2 1\ne 1 2\n");
    let garbage = write(dir.path(), "garbage.txt", "not a trace\n");
    let out = sqroot(&["restore", &root, "--trace", &garbage]);
    assert_eq!(out.status.code(), Some(3));
    // a trace mentioning vertices beyond the root's range
    let trace = write(
        dir.path(),
        "big.txt",
        "uv 5 6 branch nontwin X 7 Y 4 force - forbid - delete -\n",
    );
    let out = sqroot(&["restore", &root, "--trace", &trace]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "c7sq.sqr", &c7_square());
    for cmd in [vec!["solve", &file], vec!["reduce", &file], vec!["enumerate", &file]] {
        let a = sqroot(&cmd);
        let b = sqroot(&cmd);
        assert_eq!(stdout(&a), stdout(&b));
    }
}

#[test]
fn dot_output_is_graphviz_text() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "k3.sqr", K3);
    let dot_path = dir.path().join("k3.dot");
    let out = sqroot(&["square", &file, "--dot", dot_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("1 -- 2;"));
}

#[test]
fn kernelize_jobs_flag_is_output_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let sq = stdout(&sqroot(&[
        "generate", "--kind", "apex-square", "--seed", "31", "--size", "40", "--k", "3",
    ]));
    let file = write(dir.path(), "apex.sqr", &sq);
    let one = sqroot(&["kernelize", &file, "--k", "3", "--jobs", "1"]);
    let four = sqroot(&["kernelize", &file, "--k", "3", "--jobs", "4"]);
    assert_eq!(stdout(&one), stdout(&four));
    assert_eq!(one.status.code(), four.status.code());
}
