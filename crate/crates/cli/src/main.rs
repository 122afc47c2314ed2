use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use robust_summary::adversary::read_id_list;
use robust_summary::experiment::parse_order;
use robust_summary::{
    centralized_phase1, generate_instance, phase2, run_experiment, streaming_phase1, theoretical_bound,
    verify_summary, ArrivalOrder, CentralizedConfig, ExperimentConfig, GeneratorSpec, Instance, MatroidSpec,
    Mode, Recompute, SolverKind, StrategySpec, StreamingConfig, Summary, VerifyOptions,
};

/// Deletion-robust submodular maximization under matroid constraints.
#[derive(Parser)]
#[command(name = "robust-summary", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic instance file.
    Gen(GenArgs),
    /// Build a Phase I summary.
    Summarize(SummarizeArgs),
    /// Run Phase II on a summary after deletions.
    Solve(SolveArgs),
    /// Check a summary's invariants.
    Verify(VerifyArgs),
    /// Evaluate an approximation factor.
    Bound(BoundArgs),
    /// Run a seeded experiment from a config file.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct GenArgs {
    /// e.g. `coverage(14,30,0.2)`, `facility(10,8)`, `cut(12,0.5,1,3)`, `lowerbound(4,3,5)`.
    #[arg(long)]
    spec: String,
    /// e.g. `uniform(3)`, `partition(3,1)`, `graphic(8)`.
    #[arg(long, default_value = "uniform(1)")]
    matroid: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Centralized,
    Streaming,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Centralized => Mode::Centralized,
            ModeArg::Streaming => Mode::Streaming,
        }
    }
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, default_value = "centralized")]
    mode: ModeArg,
    #[arg(long)]
    epsilon: f64,
    #[arg(short, long)]
    d: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use the monotone variant (`⌈d/ε⌉` buckets; streaming `γ = 1, p = 1`).
    #[arg(long, conflicts_with = "general")]
    monotone: bool,
    /// Use the general variant even for a monotone objective.
    #[arg(long)]
    general: bool,
    /// Centralized: recompute marginals literally instead of lazily.
    #[arg(long)]
    literal: bool,
    /// Streaming arrival order: `natural`, `shuffle:SEED` or `file:PATH`.
    #[arg(long, default_value = "natural")]
    order: String,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    /// Include the streaming audit trail in the output.
    #[arg(long)]
    audit: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    summary: PathBuf,
    /// Instance file; defaults to the path recorded in the summary.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Deletion strategy: `top:d`, `rand:d:seed`, `block:d:id`, `maxdmg:d`, `list:path`.
    #[arg(long, conflicts_with = "delete_ids")]
    delete: Option<String>,
    /// Comma-separated deleted ids.
    #[arg(long, value_delimiter = ',')]
    delete_ids: Vec<usize>,
    #[arg(long, default_value = "greedy")]
    solver: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    summary: PathBuf,
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    random_deletions: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    monotone: bool,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    epsilon: f64,
    #[arg(long, default_value_t = robust_summary::streaming::DEFAULT_GAMMA)]
    gamma: f64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `[output] dir`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn write_or_print(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn gen(args: GenArgs) -> Result<ExitCode> {
    let spec = GeneratorSpec::parse(&args.spec)?;
    let matroid = MatroidSpec::parse(&args.matroid)?;
    let instance = generate_instance(&spec, &matroid, args.seed)?;
    write_or_print(args.output.as_deref(), &instance.to_text())?;
    Ok(ExitCode::SUCCESS)
}

fn arrival_order(s: &str) -> Result<ArrivalOrder> {
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(ArrivalOrder::Explicit(read_id_list(Path::new(path))?));
    }
    Ok(parse_order(s)?)
}

fn summarize(args: SummarizeArgs) -> Result<ExitCode> {
    let instance = Instance::load(&args.instance).with_context(|| format!("loading {}", args.instance.display()))?;
    let monotone = if args.monotone {
        true
    } else if args.general {
        false
    } else {
        instance.objective.is_monotone()
    };
    let mut summary = match Mode::from(args.mode) {
        Mode::Centralized => {
            let recompute = if args.literal { Recompute::Literal } else { Recompute::Lazy };
            let config = CentralizedConfig::new(args.epsilon, args.d, args.seed)
                .monotone(monotone)
                .recompute(recompute);
            if !config.in_guarantee_range() {
                eprintln!("warning: epsilon = {} is outside (0, 1/5); no guarantee applies", args.epsilon);
            }
            centralized_phase1(&instance, &config)?
        }
        Mode::Streaming => {
            let mut config = StreamingConfig::new(args.epsilon, args.d, monotone, args.seed);
            if let Some(g) = args.gamma {
                config = config.with_gamma(g);
            }
            if let Some(p) = args.p {
                config = config.with_p(p);
            }
            let order = arrival_order(&args.order)?.resolve(instance.n());
            streaming_phase1(&instance, &order, &config)?
        }
    };
    summary.instance_path = Some(args.instance.display().to_string());
    write_or_print(args.output.as_deref(), &summary.to_text(args.audit))?;
    eprintln!(
        "|A| = {}, |B| = {}, size bound = {}, oracle calls = {}",
        summary.solution.len(),
        summary.reservoir.len(),
        summary.size_bound(),
        summary.counters.oracle_calls
    );
    Ok(ExitCode::SUCCESS)
}

fn instance_for(summary: &Summary, summary_path: &Path, explicit: Option<&Path>) -> Result<Instance> {
    if let Some(path) = explicit {
        return Instance::load(path).with_context(|| format!("loading {}", path.display()));
    }
    let Some(recorded) = &summary.instance_path else {
        bail!("summary records no instance path; pass --instance");
    };
    let recorded = PathBuf::from(recorded);
    let candidates = [
        recorded.clone(),
        summary_path.parent().unwrap_or(Path::new(".")).join(&recorded),
    ];
    let path = candidates
        .iter()
        .find(|p| p.exists())
        .with_context(|| format!("instance {} not found; pass --instance", recorded.display()))?;
    Instance::load(path).with_context(|| format!("loading {}", path.display()))
}

fn solve(args: SolveArgs) -> Result<ExitCode> {
    let summary = Summary::load(&args.summary).with_context(|| format!("loading {}", args.summary.display()))?;
    let instance = instance_for(&summary, &args.summary, args.instance.as_deref())?;
    let solver = SolverKind::parse(&args.solver).with_context(|| format!("unknown solver `{}`", args.solver))?;
    let deleted = match &args.delete {
        Some(spec) => {
            let mut spec = StrategySpec::parse(spec)?;
            if spec.d == usize::MAX {
                spec.d = instance.n();
            }
            spec.choose(&instance)?
        }
        None => args.delete_ids.clone(),
    };
    if let Some(&bad) = deleted.iter().find(|&&e| e >= instance.n()) {
        bail!("deleted id {bad} out of range 0..{}", instance.n());
    }
    let sol = phase2(&summary, &deleted, &instance, solver)?;
    if sol.guarantee_void {
        eprintln!(
            "warning: {} deletions exceed the budget d = {}; no guarantee applies",
            deleted.len(),
            summary.d
        );
    }
    println!("deleted = {deleted:?}");
    println!("solution = {:?}", sol.set);
    println!("value = {}", sol.value);
    println!("source = {}", sol.source);
    println!("surviving_value = {}", sol.surviving_value);
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    let summary = Summary::load(&args.summary).with_context(|| format!("loading {}", args.summary.display()))?;
    let instance = instance_for(&summary, &args.summary, args.instance.as_deref())?;
    let report = verify_summary(
        &summary,
        &instance,
        VerifyOptions {
            random_deletions: args.random_deletions,
            seed: args.seed,
        },
    )?;
    println!("{report}");
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn bound(args: BoundArgs) -> Result<ExitCode> {
    let report = theoretical_bound(args.mode.into(), args.monotone, args.beta, args.epsilon, args.gamma);
    println!("{:.6}", report.value);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok(ExitCode::SUCCESS)
}

fn experiment(args: ExperimentArgs) -> Result<ExitCode> {
    let mut config = ExperimentConfig::load(&args.config).with_context(|| format!("loading {}", args.config.display()))?;
    if let Some(dir) = args.out_dir {
        config.output_dir = Some(dir);
    }
    let report = run_experiment(&config)?;
    print!("{}", report.to_text());
    if let Some(dir) = &report.run_dir {
        println!("results written to {}", dir.display());
    }
    Ok(if report.invariants_ok() && report.bounds_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Summarize(a) => summarize(a),
        Command::Solve(a) => solve(a),
        Command::Verify(a) => verify(a),
        Command::Bound(a) => bound(a),
        Command::Experiment(a) => experiment(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
