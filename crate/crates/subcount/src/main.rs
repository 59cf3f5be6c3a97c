//! Command-line front end: estimate, count exactly, decompose, generate
//! instances, and run benchmark suites.
//!
//! Exactly one machine-readable line goes to stdout on success; prose and
//! errors go to stderr. Exit codes: 2 for unreadable or malformed inputs,
//! 3 for infeasible patterns, 4 for exhausted budgets, 1 otherwise.

mod bench;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use subcount::estimator::{self, format_rational, EstimationConfig};
use subcount::graph::Graph;
use subcount::instances::{self, JoinSide};
use subcount::oracle;
use subcount::pattern::{decompose, Pattern};
use subcount::Error;

#[derive(Parser)]
#[command(name = "subcount", version, about = "Sublinear subgraph count estimation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Estimate the number of pattern copies in a graph.
    Count(CountArgs),
    /// Count copies exactly by brute force.
    Exact {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        /// Also count copies with matching edge colors.
        #[arg(long)]
        colored: bool,
    },
    /// Print the odd-cycle/star decomposition of a pattern.
    Decompose {
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Generate instance files.
    #[command(subcommand)]
    Gen(GenCmd),
    /// Run a benchmark suite and write a CSV report.
    Bench {
        /// One of: cliques, odd-cycles, stars, figure1, join.
        #[arg(long)]
        suite: bench::Suite,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    pattern: PathBuf,
    /// Target precision in (0, 1).
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Known lower bound on the copy count; skips the geometric search.
    #[arg(long)]
    hint: Option<f64>,
    /// Count copies with matching edge colors.
    #[arg(long)]
    colored: bool,
    /// Use the star-specialized draw schedule.
    #[arg(long)]
    star_fast: bool,
    /// Per-round query budget multiplier.
    #[arg(long, default_value_t = 10.0)]
    budget: f64,
    /// Averaging constant in the draw-count formula.
    #[arg(long, default_value_t = 64.0)]
    c: f64,
    /// Skip estimation and print the exact count.
    #[arg(long)]
    exact: bool,
}

#[derive(Subcommand)]
enum GenCmd {
    /// Layered construction hiding odd cycles behind one pair gadget.
    Disj {
        /// Layer size.
        #[arg(long = "K")]
        layers: usize,
        /// Cycle parameter; the hidden cycle has 2k+1 edges.
        #[arg(long = "k")]
        k: usize,
        /// Intersecting index pair, as `i,j`.
        #[arg(long, value_parser = parse_pair)]
        hit: Option<(usize, usize)>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Block-product join instance with a single recolored edge.
    Join {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        which: WhichSide,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the recolored pattern.
        #[arg(long)]
        pattern_out: Option<PathBuf>,
    },
    /// Uniform random graph with exactly m edges.
    Gnm {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random background plus vertex-disjoint planted pattern copies.
    Planted {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        copies: usize,
        /// Total vertex count, background included.
        #[arg(long)]
        n: usize,
        /// Total edge count, planted copies included.
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichSide {
    G0,
    G1,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `i,j`, got {s:?}"))?;
    Ok((
        a.trim().parse().map_err(|e| format!("{e}"))?,
        b.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn load_graph(path: &Path) -> subcount::Result<Graph> {
    Graph::parse(BufReader::new(File::open(path)?))
}

fn load_pattern(path: &Path) -> subcount::Result<Pattern> {
    Pattern::new(load_graph(path)?)
}

fn write_graph(g: &Graph, path: &Path) -> subcount::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    g.write_to(&mut w)?;
    w.flush()?;
    Ok(())
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::DuplicateEdge(..)
        | Error::SelfLoop(..)
        | Error::VertexOutOfRange(..)
        | Error::NeighborIndexOutOfRange { .. }
        | Error::PairQuerySameVertex(..)
        | Error::EmptyGraph
        | Error::ColorModeMismatch
        | Error::InfeasibleInstance(..)
        | Error::Io(..) => 2,
        Error::IsolatedVertex(..) | Error::PatternTooLarge(..) | Error::NotAStar => 3,
        Error::BudgetExhausted | Error::EnumerationBudget(..) => 4,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = dispatch(cli) {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

fn dispatch(cli: Cli) -> subcount::Result<()> {
    match cli.cmd {
        Cmd::Count(args) => run_count(args),
        Cmd::Exact {
            graph,
            pattern,
            colored,
        } => run_exact(&graph, &pattern, colored),
        Cmd::Decompose { pattern } => run_decompose(&pattern),
        Cmd::Gen(gen) => run_gen(gen),
        Cmd::Bench { suite, out, seed } => bench::run(suite, &out, seed),
    }
}

fn run_count(args: CountArgs) -> subcount::Result<()> {
    let g = load_graph(&args.graph)?;
    let h = load_pattern(&args.pattern)?;
    if args.exact {
        let start = Instant::now();
        let d = decompose(&h)?;
        let counts = oracle::exact_count(&g, &h, args.colored)?;
        let estimate = if args.colored {
            counts.colorful_count.unwrap()
        } else {
            counts.subgraph_count
        };
        println!(
            "estimate={} f={} rho={} rounds=0 k=0 fallback=1 q_degree=0 q_neighbor=0 q_pair={} q_edge=0 time_ms={}",
            estimate,
            format_rational(d.f),
            format_rational(d.rho),
            g.m(),
            start.elapsed().as_millis()
        );
        return Ok(());
    }
    let cfg = EstimationConfig {
        epsilon: args.eps,
        c: args.c,
        budget_factor: args.budget,
        seed: args.seed,
        colored: args.colored,
        star_fast: args.star_fast,
        h_hint: args.hint,
        ..Default::default()
    };
    let report = estimator::run(&g, &h, &cfg)?;
    println!("{}", report.result_line());
    Ok(())
}

fn run_exact(graph: &Path, pattern: &Path, colored: bool) -> subcount::Result<()> {
    let g = load_graph(graph)?;
    let h = load_pattern(pattern)?;
    let counts = oracle::exact_count(&g, &h, colored)?;
    match counts.colorful_count {
        Some(c) => println!(
            "count={} profiles={} colorful={}",
            counts.subgraph_count, counts.profile_count, c
        ),
        None => println!(
            "count={} profiles={}",
            counts.subgraph_count, counts.profile_count
        ),
    }
    Ok(())
}

fn run_decompose(pattern: &Path) -> subcount::Result<()> {
    let h = load_pattern(pattern)?;
    let d = decompose(&h)?;
    let mut line = format!("rho={} f={}", format_rational(d.rho), format_rational(d.f));
    for cyc in &d.cycles {
        let verts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
        line.push_str(&format!(" cycle={}", verts.join(",")));
    }
    for (center, petals) in &d.stars {
        let ps: Vec<String> = petals.iter().map(|v| v.to_string()).collect();
        line.push_str(&format!(" star={center}:{}", ps.join(",")));
    }
    println!("{line}");
    Ok(())
}

/// Oracle truth for generated instances, skipped when enumeration is too
/// expensive for a generator run.
fn oracle_truth(g: &Graph, h: &Pattern) -> Option<u64> {
    if g.m() > 4096 {
        return None;
    }
    oracle::exact_count_budgeted(g, h, false, 500_000_000)
        .ok()
        .map(|c| c.subgraph_count)
}

fn run_gen(gen: GenCmd) -> subcount::Result<()> {
    match gen {
        GenCmd::Disj {
            layers,
            k,
            hit,
            out,
        } => {
            let inst = instances::gen_disjointness(layers, k, hit)?;
            write_graph(&inst.graph, &out)?;
            let cycle = cycle_pattern(2 * k + 1);
            let truth =
                oracle_truth(&inst.graph, &cycle).map_or("na".to_string(), |t| t.to_string());
            println!(
                "out={} n={} m={} truth={truth}",
                out.display(),
                inst.graph.n(),
                inst.graph.m()
            );
        }
        GenCmd::Join {
            pattern,
            m,
            which,
            seed,
            out,
            pattern_out,
        } => {
            let h = load_pattern(&pattern)?;
            let side = match which {
                WhichSide::G0 => JoinSide::G0,
                WhichSide::G1 => JoinSide::G1,
            };
            let inst = instances::gen_join_lowerbound(&h, m, side, seed)?;
            write_graph(&inst.graph, &out)?;
            let mut line = format!(
                "out={} n={} m={} truth={}",
                out.display(),
                inst.graph.n(),
                inst.graph.m(),
                inst.truth_colorful
            );
            if let Some(p) = pattern_out {
                write_graph(inst.pattern.graph(), &p)?;
                line.push_str(&format!(" pattern_out={}", p.display()));
            }
            println!("{line}");
        }
        GenCmd::Gnm { n, m, seed, out } => {
            let g = instances::gen_random(n, m, seed)?;
            write_graph(&g, &out)?;
            println!("out={} n={} m={} truth=na", out.display(), g.n(), g.m());
        }
        GenCmd::Planted {
            pattern,
            copies,
            n,
            m,
            seed,
            out,
        } => {
            let h = load_pattern(&pattern)?;
            let planted_vertices = copies * h.vertex_count();
            let planted_edges = copies * h.edge_count();
            if planted_vertices > n || planted_edges > m {
                return Err(Error::InfeasibleInstance(format!(
                    "{copies} copies need {planted_vertices} vertices and {planted_edges} edges, \
                     beyond the requested n={n}, m={m}"
                )));
            }
            let base = instances::gen_random(n - planted_vertices, m - planted_edges, seed)?;
            let g = instances::gen_planted(&base, &h, copies)?;
            write_graph(&g, &out)?;
            let truth = oracle_truth(&g, &h).map_or("na".to_string(), |t| t.to_string());
            println!(
                "out={} n={} m={} truth={truth}",
                out.display(),
                g.n(),
                g.m()
            );
        }
    }
    Ok(())
}

fn cycle_pattern(len: usize) -> Pattern {
    let edges: Vec<(u32, u32)> = (0..len)
        .map(|i| (i as u32, ((i + 1) % len) as u32))
        .collect();
    Pattern::from_edges(len, edges).expect("cycles are valid patterns")
}
