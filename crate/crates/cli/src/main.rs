mod spec;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use treegrowth_core::closed_form::SeedSummary;
use treegrowth_core::edgelist::{format_edge_list, parse_edge_list};
use treegrowth_core::growth::DEFAULT_MAX_VERTICES;
use treegrowth_core::oracles::{monte_carlo_fpt, monte_carlo_mfpt, FptEstimate, WalkConfig};
use treegrowth_core::{
    geodesic_report, grow_with_limit, mfpt_report, run_sweep, run_verify, Corpus, GeodesicReport,
    GrowthOp, MfptReport, SweepPlan, VerifyOptions,
};

const EXIT_USAGE: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_SIZE_LIMIT: u8 = 3;

/// Trees grown by subdivision or (1,m)-star-fractal steps: exact geodesic
/// sums, mean first-passage times, verification and sweeps.
#[derive(Parser)]
#[command(name = "treegrowth", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grow a tree and write its edge list.
    Generate(GenerateArgs),
    /// Closed-form geodesic and MFPT report as JSON.
    Compute(ComputeArgs),
    /// Run the formula-vs-oracle suites.
    Verify(VerifyArgs),
    /// Write a CSV sweep over operations and steps.
    Sweep(SweepArgs),
    /// Monte Carlo first-passage times on an edge-list file.
    Walk(WalkArgs),
}

#[derive(Args)]
struct GrowthArgs {
    /// edge | path:K | star:K | file:PATH | random:N:SEED
    #[arg(long, default_value = "edge")]
    seed: String,
    /// subdivision | star-fractal
    #[arg(long)]
    op: String,
    /// Pendant leaves per new center (star-fractal only, default 1).
    #[arg(long)]
    m: Option<u32>,
    /// Number of growth steps.
    #[arg(long)]
    t: u32,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    growth: GrowthArgs,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Geodesic,
    Mfpt,
    All,
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    growth: GrowthArgs,
    #[arg(long, value_enum, default_value = "all")]
    what: What,
}

#[derive(Clone, Copy, ValueEnum)]
enum CorpusArg {
    Small,
    Full,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "small")]
    corpus: CorpusArg,
    /// Seed for the random trees in the corpus.
    #[arg(long, default_value_t = 0)]
    seed_rng: u64,
    /// Print the summary as JSON instead of a table.
    #[arg(long)]
    json: bool,
    /// Corrupt the closed forms to check that the suites notice (debug builds only).
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    Fig3,
    Fig6,
}

#[derive(Args)]
struct SweepArgs {
    /// Preset sweep.
    #[arg(
        long,
        value_enum,
        conflicts_with = "custom",
        required_unless_present = "custom"
    )]
    figure: Option<Figure>,
    /// Sweep the ranges given by --op, --m and --t.
    #[arg(long)]
    custom: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value = "edge")]
    seed: String,
    /// Last step of a preset sweep.
    #[arg(long, default_value_t = 5)]
    t_max: u32,
    /// subdivision | star-fractal (custom sweeps).
    #[arg(long, requires = "custom")]
    op: Option<String>,
    /// Range of m, e.g. 0..4 (custom star-fractal sweeps).
    #[arg(long, requires = "custom")]
    m: Option<String>,
    /// Range of t, e.g. 0..10 (custom sweeps).
    #[arg(long, requires = "custom")]
    t: Option<String>,
    /// Fill the BFS average column when n_t is at most this.
    #[arg(long)]
    oracle_max_n: Option<u64>,
    /// Fill the Monte Carlo MFPT columns when n_t is at most this.
    #[arg(long)]
    monte_carlo_max_n: Option<u64>,
    #[arg(long, default_value_t = 100)]
    trials: u64,
    #[arg(long, default_value_t = 100)]
    pair_budget: u64,
    #[arg(long = "rng-seed", default_value_t = 0)]
    rng_seed: u64,
    /// Fill the elapsed_*_ms columns (output is then not reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct WalkArgs {
    /// Edge-list file.
    file: PathBuf,
    #[arg(long, requires = "target", conflicts_with = "mfpt")]
    source: Option<usize>,
    #[arg(long, requires = "source")]
    target: Option<usize>,
    /// Estimate the mean over ordered pairs instead of one pair.
    #[arg(long, required_unless_present = "source")]
    mfpt: bool,
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_steps: u64,
    /// Ordered pairs sampled by --mfpt [default: all, at most 1000].
    #[arg(long)]
    pair_budget: Option<u64>,
}

fn growth_op(g: &GrowthArgs) -> Result<GrowthOp> {
    spec::parse_op(&g.op, g.m)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let seed = spec::parse_seed(&args.growth.seed)?;
    let op = growth_op(&args.growth)?;
    let t = args.growth.t;
    let tree = grow_with_limit(&seed, op, t, args.max_vertices)?;
    let header = vec![
        format!("seed: {}", args.growth.seed),
        format!("op: {op}"),
        format!("t: {t}"),
        format!("n: {}", tree.n()),
        format!("e: {}", tree.edge_count()),
    ];
    let text = format_edge_list(&tree, &header);
    match &args.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ComputeOutput<'a> {
    seed: &'a str,
    op: GrowthOp,
    t: u32,
    #[serde(flatten)]
    seed_summary: &'a SeedSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    geodesic: Option<GeodesicReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mfpt: Option<MfptReport>,
}

fn cmd_compute(args: &ComputeArgs) -> Result<ExitCode> {
    let tree = spec::parse_seed(&args.growth.seed)?;
    let op = growth_op(&args.growth)?;
    let t = args.growth.t;
    let summary = SeedSummary::from_tree(&tree)?;
    let geodesic = match args.what {
        What::Geodesic | What::All => Some(geodesic_report(&summary, op, t)?),
        What::Mfpt => None,
    };
    let mfpt = match args.what {
        What::Mfpt | What::All => Some(mfpt_report(&summary, op, t)?),
        What::Geodesic => None,
    };
    print_json(&ComputeOutput {
        seed: &args.growth.seed,
        op,
        t,
        seed_summary: &summary,
        geodesic,
        mfpt,
    })?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode> {
    if args.inject_fault && !cfg!(debug_assertions) {
        bail!("--inject-fault is only available in debug builds");
    }
    let opts = VerifyOptions {
        corpus: match args.corpus {
            CorpusArg::Small => Corpus::Small,
            CorpusArg::Full => Corpus::Full,
        },
        seed_rng: args.seed_rng,
        inject_fault: args.inject_fault,
    };
    let summary = run_verify(&opts)?;
    if args.json {
        print_json(&summary)?;
    } else {
        print!("{}", summary.table());
        let failed = summary.failed_suites();
        println!(
            "{} of {} suites passed",
            summary.suites.len() - failed,
            summary.suites.len()
        );
    }
    Ok(if summary.failed_suites() == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VERIFY)
    })
}

fn cmd_sweep(args: &SweepArgs) -> Result<ExitCode> {
    let seed = spec::parse_seed(&args.seed)?;
    let walk = WalkConfig {
        trials: args.trials,
        max_steps: 1_000_000,
        rng_seed: args.rng_seed,
    };
    let mut plan = match args.figure {
        Some(Figure::Fig3) => SweepPlan::fig3(seed, args.t_max),
        Some(Figure::Fig6) => SweepPlan::fig6(seed, args.t_max, walk, args.pair_budget),
        None => {
            let name = args.op.as_deref().context("--custom needs --op")?;
            let ts = spec::parse_range(args.t.as_deref().context("--custom needs --t")?)?;
            let ops = match name {
                "subdivision" if args.m.is_none() => vec![GrowthOp::Subdivision],
                "star-fractal" => spec::parse_range(args.m.as_deref().unwrap_or("1"))?
                    .into_iter()
                    .map(|m| spec::parse_op(name, Some(m)))
                    .collect::<Result<_>>()?,
                _ => vec![spec::parse_op(name, None)?],
            };
            SweepPlan {
                seed,
                ops,
                ts,
                oracle_max_n: 0,
                monte_carlo_max_n: 0,
                walk,
                pair_budget: args.pair_budget,
                timing: false,
            }
        }
    };
    if let Some(n) = args.oracle_max_n {
        plan.oracle_max_n = n;
    }
    if let Some(n) = args.monte_carlo_max_n {
        plan.monte_carlo_max_n = n;
    }
    plan.timing = args.timing;
    let rows = run_sweep(&plan)?;
    let file = fs::File::create(&args.out)
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    let mut w = csv::Writer::from_writer(file);
    for row in &rows {
        w.serialize(row)?;
    }
    w.flush()?;
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct WalkOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pair_budget: Option<u64>,
    n: usize,
    config: WalkConfig,
    estimate: FptEstimate,
}

fn cmd_walk(args: &WalkArgs) -> Result<ExitCode> {
    let text = fs::read_to_string(&args.file)
        .with_context(|| format!("cannot read {}", args.file.display()))?;
    let tree = parse_edge_list(&text)?;
    let config = WalkConfig {
        trials: args.trials,
        max_steps: args.max_steps,
        rng_seed: args.seed,
    };
    let out = match (args.source, args.target) {
        (Some(s), Some(t)) => WalkOutput {
            source: Some(s),
            target: Some(t),
            pair_budget: None,
            n: tree.n(),
            config,
            estimate: monte_carlo_fpt(&tree, s, t, &config)?,
        },
        _ => {
            let n = tree.n() as u64;
            let budget = args
                .pair_budget
                .unwrap_or((n * n.saturating_sub(1)).min(1000));
            WalkOutput {
                source: None,
                target: None,
                pair_budget: Some(budget),
                n: tree.n(),
                config,
                estimate: monte_carlo_mfpt(&tree, &config, budget)?,
            }
        }
    };
    print_json(&out)?;
    Ok(ExitCode::SUCCESS)
}

fn exit_code_for(err: &anyhow::Error) -> u8 {
    let size = err.chain().any(|e| {
        matches!(
            e.downcast_ref(),
            Some(treegrowth_core::Error::SizeLimitExceeded { .. })
        )
    });
    if size {
        EXIT_SIZE_LIMIT
    } else {
        EXIT_USAGE
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Compute(a) => cmd_compute(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Walk(a) => cmd_walk(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
