//! `sqroot`: decide and construct square roots of graphs, with forced and
//! forbidden root edges.

use clap::{Parser, Subcommand, ValueEnum};
use sqroot::oracle::{enumerate_roots, solve_labeled, SearchLimits, SolveOutcome};
use sqroot::reduction::ReductionTrace;
use sqroot::{
    edge_reduce, generate_apex_square, generate_hkt_root, hkt_planar_square_check, kernelize,
    restore_solution, solve_labeled_tw, treewidth_at_most, verify_solution, EdgeReduceOutcome,
    Graph, KernelOutcome, LabeledInstance, TreeDecomposition, TwOutcome,
};
use sqroot_cli::format;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_BUDGET: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "sqroot",
    about = "Square roots of graphs under edge labels",
    long_about = "Decides whether a graph is the square of another graph, optionally with \
                  forced (r) and forbidden (b) root edges, and reconstructs a root when one \
                  exists. Ships the edge reduction preprocessor, a linear kernel for graphs \
                  that are planar after deleting k vertices, and a full pipeline for graphs \
                  of maximum average degree below 46/11."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Bruteforce,
    Tw,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    HktRoot,
    ApexSquare,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the square of the input graph as an instance file
    Square {
        file: PathBuf,
        /// Also write the square as Graphviz text
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Decide the instance; prints YES with a root edge list, NO, or TIMEOUT
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Bruteforce)]
        engine: Engine,
        /// Node budget for the bruteforce engine
        #[arg(long, default_value_t = SearchLimits::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Write the found root as an instance file
        #[arg(long)]
        emit_root: Option<PathBuf>,
    },
    /// Run edge reduction; prints the reduced instance or NO
    Reduce {
        file: PathBuf,
        /// Write the reduction trace (one event per line)
        #[arg(long)]
        emit_trace: Option<PathBuf>,
    },
    /// Re-add reduced edges to a root of the reduced instance
    Restore {
        /// Instance file holding the root of the reduced instance
        root: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Kernelize for graphs planar after deleting k vertices
    Kernelize {
        file: PathBuf,
        /// The promised deletion distance to planarity
        #[arg(long)]
        k: usize,
        #[arg(long)]
        emit_trace: Option<PathBuf>,
        /// Node budget for each solved component
        #[arg(long, default_value_t = SearchLimits::DEFAULT_NODE_BUDGET)]
        budget: u64,
        /// Worker threads for component solving
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the exact maximum average degree as a fraction p/q
    Mad { file: PathBuf },
    /// Find a tree decomposition of width at most k, or report >k
    Treewidth {
        file: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Check whether the graph's square is planar
    CheckHkt { file: PathBuf },
    /// Emit a seeded test instance
    Generate {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        seed: u64,
        /// Apex count for apex-square
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Target vertex count of the root
        #[arg(long, default_value_t = 24)]
        size: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List the roots of the input graph
    Enumerate {
        file: PathBuf,
        #[arg(long, default_value_t = 100)]
        cap: usize,
        #[arg(long, default_value_t = SearchLimits::DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
}

fn main() -> ExitCode {
    // die quietly when a pipe reader goes away, like any shell tool
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    ExitCode::from(run(Cli::parse()))
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn load(path: &Path) -> Result<LabeledInstance, u8> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format_args!("{}: {e}", path.display())))?;
    format::parse_instance(&text)
        .map_err(|e| input_error(format_args!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), u8> {
    std::fs::write(path, content)
        .map_err(|e| input_error(format_args!("{}: {e}", path.display())))
}

fn print_root(h: &Graph) {
    for e in h.edges() {
        println!("e {} {}", e.u() + 1, e.v() + 1);
    }
}

fn run(cli: Cli) -> u8 {
    match dispatch(cli) {
        Ok(code) | Err(code) => code,
    }
}

fn dispatch(cli: Cli) -> Result<u8, u8> {
    match cli.cmd {
        Cmd::Square { file, dot } => {
            let inst = load(&file)?;
            let sq = inst.graph.square();
            if let Some(path) = dot {
                write_file(&path, &format::to_dot(&sq))?;
            }
            print!("{}", format::print_graph(&sq));
            Ok(EXIT_OK)
        }

        Cmd::Solve {
            file,
            engine,
            budget,
            emit_root,
        } => {
            let inst = load(&file)?;
            let solution = match engine {
                Engine::Bruteforce => {
                    match solve_labeled(&inst, SearchLimits::budget(budget)).outcome {
                        SolveOutcome::Timeout => {
                            println!("TIMEOUT");
                            return Ok(EXIT_BUDGET);
                        }
                        SolveOutcome::No => None,
                        SolveOutcome::Solution(h) => Some(h),
                    }
                }
                Engine::Tw => solve_by_treewidth(&inst)?,
            };
            match solution {
                Some(h) => {
                    debug_assert!(verify_solution(&inst, &h));
                    if let Some(path) = emit_root {
                        write_file(&path, &format::print_graph(&h))?;
                    }
                    println!("YES");
                    print_root(&h);
                }
                None => println!("NO"),
            }
            Ok(EXIT_OK)
        }

        Cmd::Reduce { file, emit_trace } => {
            let inst = load(&file)?;
            match edge_reduce(&inst) {
                EdgeReduceOutcome::No => println!("NO"),
                EdgeReduceOutcome::Reduced { instance, trace } => {
                    if let Some(path) = emit_trace {
                        write_file(&path, &trace.to_text())?;
                    }
                    print!("{}", format::print_instance(&instance));
                }
            }
            Ok(EXIT_OK)
        }

        Cmd::Restore { root, trace } => {
            let root_inst = load(&root)?;
            let text = std::fs::read_to_string(&trace)
                .map_err(|e| input_error(format_args!("{}: {e}", trace.display())))?;
            let parsed = ReductionTrace::from_text(&text)
                .map_err(|e| input_error(format_args!("{}: {e}", trace.display())))?;
            let n = root_inst.graph.vertex_count();
            if let Some(ev) = parsed.events.iter().find(|ev| ev.edge.v() >= n) {
                return Err(input_error(format_args!(
                    "{}: trace edge {}-{} is outside the root's {n} vertices",
                    trace.display(),
                    ev.edge.u() + 1,
                    ev.edge.v() + 1
                )));
            }
            let restored = restore_solution(&parsed, &root_inst.graph);
            print!("{}", format::print_graph(&restored));
            Ok(EXIT_OK)
        }

        Cmd::Kernelize {
            file,
            k,
            emit_trace,
            budget,
            jobs,
        } => {
            let inst = load(&file)?;
            let limits = SearchLimits::budget(budget);
            let oracle = move |sub: &LabeledInstance| solve_labeled(sub, limits).outcome;
            match kernelize(&inst, k, &oracle, jobs.max(1)) {
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(EXIT_BUDGET)
                }
                Ok(outcome) => {
                    if let Some(path) = emit_trace {
                        // the trace is recomputed; reduction is deterministic
                        if let EdgeReduceOutcome::Reduced { trace, .. } = edge_reduce(&inst) {
                            write_file(&path, &trace.to_text())?;
                        }
                    }
                    match outcome {
                        KernelOutcome::Yes(witness) => {
                            println!("YES");
                            if let Some(h) = witness {
                                print_root(&h);
                            }
                        }
                        KernelOutcome::No => println!("NO"),
                        KernelOutcome::Kernel(bundle) => {
                            println!("KERNEL");
                            print!("{}", format::print_instance(&bundle.instance));
                            for (kid, orig) in bundle.vertex_map.iter().enumerate() {
                                println!("c map {} {}", kid + 1, orig + 1);
                            }
                        }
                    }
                    Ok(EXIT_OK)
                }
            }
        }

        Cmd::Mad { file } => {
            let inst = load(&file)?;
            if inst.graph.vertex_count() == 0 {
                return Err(input_error("maximum average degree needs a vertex"));
            }
            let mad = sqroot::max_average_degree(&inst.graph);
            println!("{}/{}", mad.numer(), mad.denom());
            Ok(EXIT_OK)
        }

        Cmd::Treewidth { file, k } => {
            let inst = load(&file)?;
            match treewidth_at_most(&inst.graph, k) {
                None => println!(">{k}"),
                Some(td) => print_decomposition(&td, inst.graph.vertex_count()),
            }
            Ok(EXIT_OK)
        }

        Cmd::CheckHkt { file } => {
            let inst = load(&file)?;
            if hkt_planar_square_check(&inst.graph) {
                println!("PLANAR-SQUARE");
            } else {
                println!("NOT");
            }
            Ok(EXIT_OK)
        }

        Cmd::Generate {
            kind,
            seed,
            k,
            size,
            dot,
        } => {
            let (graph, banner) = match kind {
                GenKind::HktRoot => (
                    generate_hkt_root(seed, size),
                    format!("c kind=hkt-root seed={seed} size={size}"),
                ),
                GenKind::ApexSquare => {
                    let gen = generate_apex_square(seed, k, size);
                    (
                        gen.square,
                        format!("c kind=apex-square seed={seed} size={size} k={k}"),
                    )
                }
            };
            if let Some(path) = dot {
                write_file(&path, &format::to_dot(&graph))?;
            }
            println!("{banner}");
            print!("{}", format::print_graph(&graph));
            Ok(EXIT_OK)
        }

        Cmd::Enumerate { file, cap, budget } => {
            let inst = load(&file)?;
            let res = enumerate_roots(&inst.graph, cap, SearchLimits::budget(budget));
            let status = if res.complete {
                "COMPLETE"
            } else if res.roots.len() >= cap {
                "CAPPED"
            } else {
                "BUDGET"
            };
            println!("ROOTS {} {status}", res.roots.len());
            for root in &res.roots {
                let edges: Vec<String> = root
                    .edges()
                    .map(|e| format!("{}-{}", e.u() + 1, e.v() + 1))
                    .collect();
                println!("root {}", edges.join(" "));
            }
            Ok(if status == "BUDGET" { EXIT_BUDGET } else { EXIT_OK })
        }
    }
}

/// Reduce first, then find an exact-width decomposition and run the
/// dynamic program over it. Suits instances whose reduced graph has small
/// treewidth; wider inputs are rejected with a message.
fn solve_by_treewidth(inst: &LabeledInstance) -> Result<Option<Graph>, u8> {
    let (reduced, trace) = match edge_reduce(inst) {
        EdgeReduceOutcome::No => return Ok(None),
        EdgeReduceOutcome::Reduced { instance, trace } => (instance, trace),
    };
    let n = reduced.graph.vertex_count();
    let td: TreeDecomposition = (0..=n)
        .find_map(|k| treewidth_at_most(&reduced.graph, k))
        .expect("width n always succeeds");
    if td.width() > 7 {
        return Err(input_error(format_args!(
            "reduced graph has treewidth {}, beyond the tw engine's bag limit of 8",
            td.width()
        )));
    }
    match solve_labeled_tw(&reduced, &td) {
        TwOutcome::No => Ok(None),
        TwOutcome::Solution(h) => Ok(Some(restore_solution(&trace, &h))),
    }
}

fn print_decomposition(td: &TreeDecomposition, n: usize) {
    let max_bag = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    println!("s td {} {} {}", td.bags.len(), max_bag, n);
    for (i, bag) in td.bags.iter().enumerate() {
        let verts: Vec<String> = bag.iter().map(|v| (v + 1).to_string()).collect();
        println!("b {} {}", i + 1, verts.join(" "));
    }
    for &(a, b) in &td.tree_edges {
        println!("{} {}", a + 1, b + 1);
    }
}
