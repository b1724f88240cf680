use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use babgraph::bab::{generate_random_bab, GenParams};
use babgraph::report::{analyze, AnalyzeOptions};
use babgraph::search::{self, SearchOptions, Source};
use babgraph::verify::{self, Mode, Mutant, VerifyOptions};
use babgraph::{Error, Graph};

/// Matchings, critical independent sets and Sachs determinants of
/// bipartite–almost bipartite graphs.
#[derive(Parser)]
#[command(name = "babgraph", version)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Analyze a graph file (edge-list format).
    Analyze {
        file: PathBuf,
        /// Print the report as JSON.
        #[arg(long)]
        json: bool,
        /// Cross-check fast paths against the enumeration oracles.
        #[arg(long)]
        oracle: bool,
        /// Refuse graphs with more vertices than this.
        #[arg(long, default_value_t = 16)]
        max_n: usize,
    },
    /// Generate a random BAB instance and its structure sidecar.
    Generate(GenerateArgs),
    /// Run the property suites.
    Verify(VerifyArgs),
    /// Search for counterexamples to a conjectured bound.
    Search(SearchArgs),
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    seed: u64,
    /// Number of almost bipartite parts.
    #[arg(long)]
    k: Option<usize>,
    /// Order of the bipartite block, `lo..hi` or a single number.
    #[arg(long)]
    bip_order: Option<String>,
    /// Odd cycle length, `lo..hi` or a single number.
    #[arg(long)]
    cycle_len: Option<String>,
    /// Rounds of even-path attachment.
    #[arg(long)]
    depth: Option<usize>,
    /// Probability of each permitted crossing edge.
    #[arg(long)]
    crossing: Option<f64>,
    #[arg(long)]
    allow_disconnected: bool,
    /// key=value parameter file; flags override it.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Graph file to write; the structure goes to `<out>.json`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check every labeled graph with at most N vertices.
    #[arg(long, value_name = "N", conflicts_with_all = ["random", "max_n", "seed"])]
    exhaustive_n: Option<usize>,
    /// Number of seeded random trials.
    #[arg(long, value_name = "T", requires_all = ["max_n", "seed"])]
    random: Option<usize>,
    #[arg(long, value_name = "M")]
    max_n: Option<usize>,
    #[arg(long, value_name = "S")]
    seed: Option<u64>,
    #[arg(long, hide = true)]
    mutant: Option<MutantArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutantArg {
    SachsSign,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conjecture {
    CoronaKerBound,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    General,
    Bab,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    conjecture: Conjecture,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Instance source.
    #[arg(long, value_enum, default_value = "general")]
    source: SourceArg,
    /// Directory for finding files and manifest.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-evaluate a single trial seed instead of sampling.
    #[arg(long)]
    replay: Option<u64>,
}

fn read_graph(path: &PathBuf) -> Result<Graph, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Graph::parse_edge_list(&text)
}

fn write(path: &PathBuf, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn generate(a: GenerateArgs) -> Result<i32, Error> {
    let mut p = match &a.params {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            GenParams::from_kv(&text)?
        }
        None => GenParams::default(),
    };
    let range = |s: &str, what: &str| {
        babgraph::bab::parse_range(s).ok_or_else(|| Error::Parse { line: 0, message: format!("bad {what} {s:?}") })
    };
    if let Some(k) = a.k {
        p.k = k;
    }
    if let Some(r) = &a.bip_order {
        p.bipartite_order = range(r, "--bip-order")?;
    }
    if let Some(r) = &a.cycle_len {
        p.cycle_length = range(r, "--cycle-len")?;
    }
    if let Some(d) = a.depth {
        p.attachment_depth = d;
    }
    if let Some(c) = a.crossing {
        p.crossing_density = c;
    }
    p.allow_disconnected |= a.allow_disconnected;
    let (g, s) = generate_random_bab(a.seed, &p)?;
    write(&a.out, &g.to_edge_list())?;
    let mut sidecar = a.out.clone().into_os_string();
    sidecar.push(".json");
    write(&PathBuf::from(sidecar), &(s.to_json() + "\n"))?;
    eprintln!("wrote {} vertices, {} edges, k = {}", g.order(), g.edge_count(), s.k);
    Ok(0)
}

fn verify_cmd(a: VerifyArgs) -> Result<i32, Error> {
    let mode = match (a.exhaustive_n, a.random) {
        (Some(n), None) => Mode::Exhaustive { n },
        (None, Some(trials)) => Mode::Random { trials, max_n: a.max_n.unwrap(), seed: a.seed.unwrap() },
        _ => {
            eprintln!("error: give either --exhaustive-n N or --random T --max-n M --seed S");
            return Ok(1);
        }
    };
    let mutant = a.mutant.map(|MutantArg::SachsSign| Mutant::SachsSign);
    let report = verify::run(&VerifyOptions { mode, mutant })?;
    println!("{}", report.to_json());
    let total: usize = report.suites.values().map(|t| t.checked).sum();
    eprintln!("{} instances, {total} checks", report.instances);
    if report.pass {
        eprintln!("all suites pass");
        Ok(0)
    } else {
        eprintln!("failing suites: {}", report.failing_suites().join(", "));
        Ok(3)
    }
}

fn search_cmd(a: SearchArgs) -> Result<i32, Error> {
    let Conjecture::CoronaKerBound = a.conjecture;
    let source = match a.source {
        SourceArg::General => Source::General,
        SourceArg::Bab => Source::Bab,
    };
    if let Some(s) = a.replay {
        return match search::replay(source, s, a.max_n)? {
            Some((g, e)) => {
                print!("{}", g.to_edge_list());
                println!("{}", serde_json::to_string_pretty(&e).expect("evaluation serializes"));
                Ok(if e.violates() { 3 } else { 0 })
            }
            None => {
                eprintln!("seed {s} yields no instance within --max-n {}", a.max_n);
                Ok(2)
            }
        };
    }
    let report = search::run(&SearchOptions { trials: a.trials, seed: a.seed, max_n: a.max_n, source, out: a.out })?;
    println!("{}", report.to_json());
    eprintln!(
        "{} evaluated, {} skipped, {} violations, {} strict witnesses",
        report.evaluated, report.skipped, report.violations, report.strict_witnesses
    );
    Ok(if report.violations > 0 { 3 } else { 0 })
}

fn dispatch(cli: Cli) -> Result<i32, Error> {
    match cli.cmd {
        Cmd::Analyze { file, json, oracle, max_n } => {
            let g = read_graph(&file)?;
            let r = analyze(&g, AnalyzeOptions { oracle, max_n })?;
            if json {
                println!("{}", r.to_json());
            } else {
                print!("{}", r.to_text());
            }
            let suite_ok = r.theorem_suite.as_ref().is_none_or(|t| t.all_hold());
            Ok(if suite_ok { 0 } else { 3 })
        }
        Cmd::Generate(a) => generate(a),
        Cmd::Verify(a) => verify_cmd(a),
        Cmd::Search(a) => search_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global().expect("thread pool is set once");
    }
    let code = dispatch(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
