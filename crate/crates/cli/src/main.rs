//! Command-line entry point: catalog families, simplex maximization,
//! census classification, family shrinking, symmetrization, partition
//! scoring, and the verification suites.
//!
//! Exit codes: 0 on success, 1 when a verification or audit fails, 2 on
//! usage errors (unknown names, malformed input, invalid parameters).

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperlag::classify::{self, CensusError, CensusRecord};
use hyperlag::families::{self, CatalogObject, Expected};
use hyperlag::hypergraph::{Hypergraph, SetFamily};
use hyperlag::io;
use hyperlag::lagrangian::{self, Maximum, Options};
use hyperlag::shifting;
use hyperlag::symmetrize::{self, ChoiceOrder, FivePartition};
use hyperlag::verify;
use itertools::Itertools;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hyperlag",
    version,
    about = "Hypergraph Lagrangian toolkit: families, optimization, census, shifting, symmetrization"
)]
struct Cli {
    /// Cap the number of worker threads used by parallel stages.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize the edge-product polynomial over the probability simplex.
    Lagrangian(LagrangianArgs),
    /// Inspect the built-in family catalog.
    Families {
        #[command(subcommand)]
        action: FamiliesAction,
    },
    /// Enumerate isomorphism classes of maximal intersecting 3-graphs.
    Classify(ClassifyArgs),
    /// Shrink an intersecting family until no legal deletion remains.
    Shift(ShiftArgs),
    /// Run the cleaning/merging rounds and optionally audit the log.
    Symmetrize(SymmetrizeArgs),
    /// Score a 5-block partition of a 3-graph.
    Score(ScoreArgs),
    /// Run the verification suites and emit a JSON report on stdout.
    #[command(name = "verify-all")]
    VerifyAll(VerifyAllArgs),
}

#[derive(Args)]
struct LagrangianArgs {
    /// Hypergraph file (text or JSON) or a catalog family name.
    input: String,
    /// Ground-set size for parametric catalog names (defaults to the
    /// entry's reference instance).
    #[arg(long)]
    n: Option<u32>,
    /// Uniformity for parametric catalog names.
    #[arg(long)]
    r: Option<u32>,
    /// Number of independent optimizer starts.
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also enumerate every support subset (ground sets up to 10).
    #[arg(long)]
    exhaustive: bool,
    /// Emit the result as a single JSON object.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum FamiliesAction {
    /// Print the catalog with edge counts and recorded values.
    List,
    /// Write a catalog family to stdout in the hypergraph file format.
    Emit {
        name: String,
        /// Ground-set size for parametric entries (defaults to the
        /// reference instance).
        #[arg(long)]
        n: Option<u32>,
        /// Uniformity for parametric entries.
        #[arg(long)]
        r: Option<u32>,
    },
}

#[derive(Args)]
struct ClassifyArgs {
    /// Ground-set size to enumerate.
    #[arg(long)]
    n: u32,
    /// Keep only classes that cover every vertex pair.
    #[arg(long)]
    cover_pairs: bool,
    /// Write the table as CSV to this path.
    #[arg(long, value_name = "out")]
    csv: Option<PathBuf>,
    /// Wall-clock budget in seconds; required for ground sets above 7.
    #[arg(long, value_name = "S")]
    budget_seconds: Option<u64>,
}

#[derive(Args)]
struct ShiftArgs {
    /// Hypergraph file holding an intersecting family.
    file: PathBuf,
    /// `det` shrinks with the smallest legal move; `all` explores every
    /// move order and prints each distinct terminal family.
    #[arg(long, value_enum, default_value_t = Policy::Det)]
    policy: Policy,
    /// Print each move of the deterministic run.
    #[arg(long)]
    trace: bool,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Policy {
    Det,
    All,
}

#[derive(Args)]
struct SymmetrizeArgs {
    /// Hypergraph file (3-uniform).
    file: PathBuf,
    /// Degree-bound parameter: vertices below (6/25 - alpha) n^2 are cleaned.
    #[arg(long)]
    alpha: f64,
    /// Audit the run log and fail (exit 1) if any property is violated.
    #[arg(long)]
    audit: bool,
    /// Resolve arbitrary choices uniformly at random instead of by
    /// smallest index.
    #[arg(long)]
    random_order: bool,
    /// Seed for --random-order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the full run log as JSON to this path.
    #[arg(long, value_name = "out")]
    json_log: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Hypergraph file (3-uniform).
    file: PathBuf,
    /// Comma-separated block index (1..=5) for every vertex in order.
    #[arg(long, value_name = "p1,p2,...")]
    partition: String,
}

#[derive(Args)]
struct VerifyAllArgs {
    /// Run only the reference-value and small-census checks.
    #[arg(long)]
    quick: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("warning: could not cap worker threads: {e}");
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Lagrangian(args) => run_lagrangian(args),
        Command::Families { action } => run_families(action),
        Command::Classify(args) => run_classify(args),
        Command::Shift(args) => run_shift(args),
        Command::Symmetrize(args) => run_symmetrize(args),
        Command::Score(args) => run_score(args),
        Command::VerifyAll(args) => run_verify_all(args),
    }
}

/// Reads a hypergraph from a text or JSON file, picking the parser by the
/// first non-whitespace byte.
fn load_graph_file(path: &Path) -> Result<Hypergraph> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        io::hypergraph_from_json(&text)
    } else {
        io::parse_hypergraph(&text)
    };
    parsed.with_context(|| format!("parsing {}", path.display()))
}

/// Builds a catalog entry, filling parametric slots from the reference
/// instance when the caller leaves them out.
fn build_catalog_graph(name: &str, n: Option<u32>, r: Option<u32>) -> Result<Hypergraph> {
    let entry = families::find_entry(name)
        .ok_or_else(|| anyhow!("no catalog family named {name:?}"))?;
    let n = n.or_else(|| entry.takes_n.map(|_| entry.reference_n.expect("reference instance")));
    let r = r.or_else(|| entry.takes_r.map(|_| entry.reference_r.expect("reference instance")));
    match families::build(entry.name, n, r)? {
        CatalogObject::Graph(g) => Ok(g),
        CatalogObject::Family(_) => bail!(
            "{name:?} is a generating set family, not a uniform hypergraph; \
             use its generated counterpart (e.g. gen_{name})"
        ),
    }
}

fn load_graph_or_name(input: &str, n: Option<u32>, r: Option<u32>) -> Result<Hypergraph> {
    let path = Path::new(input);
    if path.is_file() {
        load_graph_file(path)
    } else if families::find_entry(input).is_some() {
        build_catalog_graph(input, n, r)
    } else {
        bail!("{input:?} is neither a readable file nor a catalog family name");
    }
}

fn run_lagrangian(args: LagrangianArgs) -> Result<ExitCode> {
    let g = load_graph_or_name(&args.input, args.n, args.r)?;
    let mut opts = Options::seeded(args.seed);
    if let Some(restarts) = args.restarts {
        opts.restarts = restarts;
    }
    opts.exhaustive_support = args.exhaustive;
    let m: Maximum<f64> = lagrangian::maximize(&g, &opts);
    if args.json {
        let report = serde_json::json!({
            "value": m.value,
            "argmax": m.weights.values(),
            "support": m.support(),
            "kkt_residual": m.kkt_residual,
            "certified": m.certified,
        });
        println!("{report}");
    } else {
        println!("value          {:.12}", m.value);
        println!(
            "argmax         {}",
            m.weights
                .values()
                .iter()
                .enumerate()
                .filter(|(_, &w)| w > 0.0)
                .map(|(i, w)| format!("{}:{:.6}", i + 1, w))
                .join(" ")
        );
        println!("support        {{{}}}", m.support().iter().join(", "));
        println!("kkt residual   {:.3e}", m.kkt_residual);
        println!("boundary gap   {:.3e}", m.boundary_excess);
        println!(
            "certified      {} (starts {}, support sweep {})",
            if m.certified { "yes" } else { "no" },
            m.restarts_used,
            if m.exhaustive { "on" } else { "off" }
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run_families(action: FamiliesAction) -> Result<ExitCode> {
    match action {
        FamiliesAction::List => {
            println!(
                "{:<12} {:>5} {:>5} {:>7}  {:<26} {}",
                "name", "n", "r", "size", "value", "summary"
            );
            for entry in families::catalog() {
                let n = entry.reference_n;
                let r = entry.reference_r;
                let obj = families::build(
                    entry.name,
                    entry.takes_n.map(|_| n.expect("reference instance")),
                    entry.takes_r.map(|_| r.expect("reference instance")),
                )
                .expect("reference instance builds");
                let size = match &obj {
                    CatalogObject::Graph(g) => format!("{}e", g.edge_count()),
                    CatalogObject::Family(f) => format!("{}m", f.len()),
                };
                let value = match entry.expected {
                    Expected::None => "-".to_string(),
                    Expected::Exact(f) => format!("= {}", f.describe()),
                    Expected::UpperBound(f) => format!("<= {}", f.describe()),
                };
                println!(
                    "{:<12} {:>5} {:>5} {:>7}  {:<26} {}",
                    entry.name,
                    n.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                    r.map(|v| v.to_string()).unwrap_or_else(|| "-".into()),
                    size,
                    value,
                    entry.summary
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        FamiliesAction::Emit { name, n, r } => {
            let g = build_catalog_graph(&name, n, r)?;
            print!("{}", io::serialize_hypergraph(&g));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_classify(args: ClassifyArgs) -> Result<ExitCode> {
    let result = match args.budget_seconds {
        Some(s) => classify::census_with_budget(args.n, Some(Duration::from_secs(s))),
        None => classify::census(args.n),
    };
    let records = match result {
        Ok(records) => records,
        Err(e @ CensusError::BudgetExceeded { .. }) => {
            eprintln!("classification aborted: {e}");
            return Ok(ExitCode::from(EXIT_FAIL));
        }
        Err(e) => return Err(e.into()),
    };
    let picked: Vec<&CensusRecord> =
        records.iter().filter(|r| !args.cover_pairs || r.covers_pairs).collect();
    println!(
        "{:<18} {:>5} {:>15} {:>12} {:>7} {:>7}  {}",
        "canonical-id", "edges", "lambda", "gap", "covers", "unique", "catalog-match"
    );
    for r in &picked {
        println!(
            "{:<18} {:>5} {:>15.12} {:>12.6e} {:>7} {:>7}  {}",
            r.id,
            r.edge_count,
            r.lambda,
            r.gap,
            r.covers_pairs,
            r.unique_intersections,
            r.catalog_match.unwrap_or("-")
        );
    }
    eprintln!(
        "{} class(es) on {} points{}",
        picked.len(),
        args.n,
        if args.cover_pairs { " covering every pair" } else { "" }
    );
    if let Some(path) = args.csv {
        let rows: Vec<CensusRecord> = picked.iter().map(|r| (*r).clone()).collect();
        std::fs::write(&path, classify::census_csv(&rows))
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn print_family(family: &SetFamily) {
    println!("# {} member(s) on ground set 1..={}", family.len(), family.n());
    for member in family.members() {
        println!("{}", member.iter().join(" "));
    }
}

fn run_shift(args: ShiftArgs) -> Result<ExitCode> {
    let family = load_graph_file(&args.file)?.to_set_family();
    match args.policy {
        Policy::Det => {
            let trace = shifting::shift_terminal(&family)?;
            if args.trace {
                for (k, step) in trace.steps.iter().enumerate() {
                    println!(
                        "# step {}: remove {} from {{{}}}{} -> {} member(s)",
                        k + 1,
                        step.applied.element,
                        step.applied.member.iter().join(","),
                        if step.merged { " (duplicate absorbed)" } else { "" },
                        step.members_after
                    );
                }
            }
            print_family(&trace.result);
        }
        Policy::All => {
            if args.trace {
                eprintln!("note: --trace applies to the deterministic policy only");
            }
            let terminals = shifting::all_terminals(&family)?;
            println!("# {} distinct terminal family(ies)", terminals.len());
            for (k, t) in terminals.iter().enumerate() {
                println!("# terminal {}", k + 1);
                print_family(t);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_symmetrize(args: SymmetrizeArgs) -> Result<ExitCode> {
    let g = load_graph_file(&args.file)?;
    let order = if args.random_order {
        ChoiceOrder::Random { seed: args.seed }
    } else {
        ChoiceOrder::Deterministic
    };
    let log = symmetrize::symmetrize_with(&g, args.alpha, order)?;
    for round in &log.rounds {
        let merged = match &round.merge {
            Some(m) => format!("merged the part of {} into {}", m.absorbed, m.absorber),
            None => "no merge".to_string(),
        };
        println!(
            "round {:>3}: cleaned {:>3} vertex(es), {}; live {}, marked {}, edges {}",
            round.index,
            round.cleanings.len(),
            merged,
            round.after_merging.alive.len(),
            round.after_merging.points.len(),
            round.after_merging.edges.len()
        );
    }
    let fin = log.final_snapshot();
    println!(
        "final: live {}, marked {} (part sizes {}), edges {}",
        fin.alive.len(),
        fin.points.len(),
        fin.parts.iter().map(Vec::len).join("+"),
        fin.edges.len()
    );
    if let Some(path) = &args.json_log {
        let payload = serde_json::to_string_pretty(&log).expect("log serializes");
        std::fs::write(path, payload).with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    if args.audit {
        let report = symmetrize::audit_properties(&log);
        for c in &report.checks {
            println!(
                "audit {:<28} {}{}",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                if c.passed && c.details.is_empty() {
                    String::new()
                } else {
                    format!(" — {}", c.details)
                }
            );
        }
        if !report.passed {
            return Ok(ExitCode::from(EXIT_FAIL));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn run_score(args: ScoreArgs) -> Result<ExitCode> {
    let g = load_graph_file(&args.file)?;
    let assignment: Vec<u8> = args
        .partition
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u8>()
                .map_err(|e| anyhow!("block index {tok:?}: {e}"))
        })
        .collect::<Result<_>>()?;
    let parts = FivePartition::new(g.n(), &assignment)?;
    let score = symmetrize::edge_goodness(&g, &parts);
    println!("sigma     {}", score.sigma);
    println!("good      {}", score.good);
    println!("bad       {}", score.bad);
    println!("very bad  {}", score.very_bad);
    println!(
        "identity  sigma = bad + 2*very-bad = {} (holds: {})",
        score.classified_sigma(),
        score.sigma == score.classified_sigma()
    );
    Ok(ExitCode::SUCCESS)
}

fn run_verify_all(args: VerifyAllArgs) -> Result<ExitCode> {
    let started = Instant::now();
    let checks = if args.quick {
        verify::quick_suite(args.seed)
    } else {
        verify::full_suite(args.seed)
    };
    let report = verify::make_report(
        "verify-all",
        serde_json::json!({ "quick": args.quick }),
        args.seed,
        checks,
    );
    let mut table = String::new();
    for c in &report.checks {
        writeln!(
            table,
            "{} {:<40} {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.details
        )
        .expect("string write");
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    eprint!("{table}");
    eprintln!(
        "{} of {} checks passed in {:.1} s",
        report.checks.len() - failed,
        report.checks.len(),
        started.elapsed().as_secs_f64()
    );
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_FAIL) })
}
