//! Seeded experiment runner.
//!
//! A config file is line-oriented `key = value` text grouped in sections;
//! `#` starts a comment.
//!
//! ```text
//! [instance]
//! generator = coverage(14,30,0.2)   # or: file = path/to/instance.txt
//! matroid = partition(3,1)
//! seed = 1
//!
//! [algorithm]
//! mode = centralized                # or streaming
//! epsilon = 0.1
//! d = 2
//! monotone = true                   # default: whether the objective is monotone
//! recompute = lazy                  # centralized: lazy | literal
//! gamma = 1.746                     # streaming only
//! p = 0.267                         # streaming only
//! order = shuffle:5                 # streaming: natural | shuffle:seed
//!
//! [phase2]
//! solver = exhaustive               # greedy | exhaustive | local-search
//!
//! [adversary]
//! strategies = top:2, rand:2:7, maxdmg:2
//! enumerate = false                 # add every d-subset as an explicit strategy
//!
//! [trials]
//! count = 500
//! seed = 0
//!
//! [checks]
//! invariants = true
//! random_deletions = 50
//! bound = true
//! slack = 0.05
//! opt = auto                        # auto | exhaustive | greedy-bound
//!
//! [output]
//! dir = runs
//! ```
//!
//! Trials for different seeds run in parallel (capped by
//! `ROBUST_SUMMARY_THREADS`) and are reduced in seed order, so reports do not
//! depend on the thread count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::adversary::{choose_deletions, combinations, opt_value, DeletionStrategy, OptMethod, OptValue, StrategySpec};
use crate::bounds::{theoretical_bound, BoundReport};
use crate::centralized::{centralized_phase1, CentralizedConfig, Recompute};
use crate::error::{invalid, Error, Result};
use crate::generate::{generate_instance, GeneratorSpec, MatroidSpec};
use crate::instance::Instance;
use crate::objective::ElementId;
use crate::phase2::{phase2, SolverKind, EXHAUSTIVE_CAP};
use crate::streaming::{streaming_phase1, ArrivalOrder, StreamingConfig, DEFAULT_GAMMA};
use crate::summary::{Mode, Summary};
use crate::verify::{verify_summary, VerifyOptions};

pub const CSV_SCHEMA: &str = "# robust-summary results v1";
pub const CSV_COLUMNS: [&str; 11] = [
    "strategy",
    "seed",
    "fS",
    "fAprime",
    "opt",
    "method",
    "ratio_ensemble",
    "summary_size",
    "peak_mem",
    "oracle_calls",
    "invariants_ok",
];
pub const THREADS_ENV: &str = "ROBUST_SUMMARY_THREADS";
/// Largest number of deletion sets `enumerate = true` will expand to.
pub const ENUMERATION_CAP: usize = 5000;
/// Failure probability used for the reported Hoeffding half-width.
const HOEFFDING_DELTA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Generated {
        spec: GeneratorSpec,
        matroid: MatroidSpec,
        seed: u64,
    },
}

impl InstanceSource {
    pub fn load(&self) -> Result<Instance> {
        match self {
            InstanceSource::File(path) => Instance::load(path),
            InstanceSource::Generated { spec, matroid, seed } => generate_instance(spec, matroid, *seed),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptChoice {
    /// Exhaustive when `n − |D|` is within the solver cap, else greedy-bound.
    Auto,
    Fixed(OptMethod),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    pub mode: Mode,
    pub epsilon: f64,
    pub d: usize,
    /// `None` follows the objective.
    pub monotone_mode: Option<bool>,
    pub recompute: Recompute,
    pub gamma: Option<f64>,
    pub p: Option<f64>,
    pub order: ArrivalOrder,
    pub solver: SolverKind,
    pub strategies: Vec<StrategySpec>,
    pub enumerate: bool,
    pub trials: usize,
    pub base_seed: u64,
    pub check_invariants: bool,
    pub random_deletions: usize,
    pub check_bound: bool,
    pub slack: f64,
    pub opt: OptChoice,
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(instance: InstanceSource, mode: Mode, epsilon: f64, d: usize) -> Self {
        ExperimentConfig {
            instance,
            mode,
            epsilon,
            d,
            monotone_mode: None,
            recompute: Recompute::Lazy,
            gamma: None,
            p: None,
            order: ArrivalOrder::Natural,
            solver: SolverKind::Greedy,
            strategies: vec![StrategySpec {
                strategy: DeletionStrategy::TopValue,
                d,
            }],
            enumerate: false,
            trials: 1,
            base_seed: 0,
            check_invariants: true,
            random_deletions: 50,
            check_bound: true,
            slack: 0.05,
            opt: OptChoice::Auto,
            output_dir: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Parses config text; relative paths are resolved against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut section = String::new();
        let mut entries: Vec<(usize, String, String)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            entries.push((line_no, format!("{section}.{}", key.trim()), value.trim().to_string()));
        }
        let lookup = |key: &str| entries.iter().rev().find(|(_, k, _)| k == key);
        let known = [
            "instance.file",
            "instance.generator",
            "instance.matroid",
            "instance.seed",
            "algorithm.mode",
            "algorithm.epsilon",
            "algorithm.d",
            "algorithm.monotone",
            "algorithm.recompute",
            "algorithm.gamma",
            "algorithm.p",
            "algorithm.order",
            "phase2.solver",
            "adversary.strategies",
            "adversary.enumerate",
            "trials.count",
            "trials.seed",
            "checks.invariants",
            "checks.random_deletions",
            "checks.bound",
            "checks.slack",
            "checks.opt",
            "output.dir",
        ];
        if let Some((line, key, _)) = entries.iter().find(|(_, k, _)| !known.contains(&k.as_str())) {
            return Err(Error::Parse {
                line: *line,
                message: format!("unknown key `{key}`"),
            });
        }
        fn value<T: std::str::FromStr>(entry: Option<&(usize, String, String)>) -> Result<Option<T>> {
            match entry {
                None => Ok(None),
                Some((line, key, v)) => v.parse().map(Some).map_err(|_| Error::Parse {
                    line: *line,
                    message: format!("bad value `{v}` for `{key}`"),
                }),
            }
        }
        let bad = |key: &str, msg: String| -> Error {
            Error::Parse {
                line: lookup(key).map_or(0, |e| e.0),
                message: msg,
            }
        };

        let instance = match (lookup("instance.file"), lookup("instance.generator")) {
            (Some((_, _, file)), None) => InstanceSource::File(base.join(file)),
            (None, Some((_, _, spec))) => {
                let matroid = lookup("instance.matroid")
                    .ok_or_else(|| bad("instance.generator", "generator needs `matroid`".into()))?;
                InstanceSource::Generated {
                    spec: GeneratorSpec::parse(spec)?,
                    matroid: MatroidSpec::parse(&matroid.2)?,
                    seed: value(lookup("instance.seed"))?.unwrap_or(0),
                }
            }
            (Some(_), Some(_)) => return Err(bad("instance.file", "give either `file` or `generator`".into())),
            (None, None) => return Err(bad("instance.file", "missing [instance] file or generator".into())),
        };
        let mode_text: String = value(lookup("algorithm.mode"))?.unwrap_or_else(|| "centralized".into());
        let mode = Mode::parse(&mode_text).ok_or_else(|| bad("algorithm.mode", format!("unknown mode `{mode_text}`")))?;
        let epsilon = value(lookup("algorithm.epsilon"))?
            .ok_or_else(|| bad("algorithm.epsilon", "missing `epsilon`".into()))?;
        let d: usize = value(lookup("algorithm.d"))?.unwrap_or(0);

        let mut config = ExperimentConfig::new(instance, mode, epsilon, d);
        config.monotone_mode = value(lookup("algorithm.monotone"))?;
        if let Some(r) = value::<String>(lookup("algorithm.recompute"))? {
            config.recompute = match r.as_str() {
                "lazy" => Recompute::Lazy,
                "literal" => Recompute::Literal,
                other => return Err(bad("algorithm.recompute", format!("unknown recompute mode `{other}`"))),
            };
        }
        config.gamma = value(lookup("algorithm.gamma"))?;
        config.p = value(lookup("algorithm.p"))?;
        if let Some(o) = value::<String>(lookup("algorithm.order"))? {
            config.order = parse_order(&o).map_err(|e| bad("algorithm.order", e.to_string()))?;
        }
        if let Some(s) = value::<String>(lookup("phase2.solver"))? {
            config.solver = SolverKind::parse(&s).ok_or_else(|| bad("phase2.solver", format!("unknown solver `{s}`")))?;
        }
        if let Some(list) = value::<String>(lookup("adversary.strategies"))? {
            let mut strategies = Vec::new();
            for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let mut spec = StrategySpec::parse(item)?;
                if let DeletionStrategy::ListFile(p) = &spec.strategy {
                    spec.strategy = DeletionStrategy::ListFile(base.join(p));
                    spec.d = d;
                }
                strategies.push(spec);
            }
            config.strategies = strategies;
        }
        config.enumerate = value(lookup("adversary.enumerate"))?.unwrap_or(false);
        config.trials = value(lookup("trials.count"))?.unwrap_or(1);
        config.base_seed = value(lookup("trials.seed"))?.unwrap_or(0);
        config.check_invariants = value(lookup("checks.invariants"))?.unwrap_or(true);
        config.random_deletions = value(lookup("checks.random_deletions"))?.unwrap_or(50);
        config.check_bound = value(lookup("checks.bound"))?.unwrap_or(true);
        config.slack = value(lookup("checks.slack"))?.unwrap_or(0.05);
        if let Some(o) = value::<String>(lookup("checks.opt"))? {
            config.opt = match o.as_str() {
                "auto" => OptChoice::Auto,
                "exhaustive" => OptChoice::Fixed(OptMethod::Exhaustive),
                "greedy-bound" => OptChoice::Fixed(OptMethod::GreedyBound),
                other => return Err(bad("checks.opt", format!("unknown opt method `{other}`"))),
            };
        }
        config.output_dir = value::<String>(lookup("output.dir"))?.map(|p| base.join(p));
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return invalid("trial count must be at least 1");
        }
        if self.strategies.is_empty() && !self.enumerate {
            return invalid("no deletion strategies configured");
        }
        if let InstanceSource::File(p) = &self.instance {
            if !p.exists() {
                return invalid(format!("instance file {} does not exist", p.display()));
            }
        }
        for s in &self.strategies {
            if let DeletionStrategy::ListFile(p) = &s.strategy {
                if !p.exists() {
                    return invalid(format!("deletion list {} does not exist", p.display()));
                }
            }
        }
        if !(self.slack >= 0.0) {
            return invalid("slack must be non-negative");
        }
        Ok(())
    }

    fn monotone_for(&self, instance: &Instance) -> bool {
        self.monotone_mode.unwrap_or_else(|| instance.objective.is_monotone())
    }

    fn streaming_config(&self, monotone: bool, seed: u64) -> StreamingConfig {
        let mut cfg = StreamingConfig::new(self.epsilon, self.d, monotone, seed);
        if let Some(g) = self.gamma {
            cfg = cfg.with_gamma(g);
        }
        if let Some(p) = self.p {
            cfg = cfg.with_p(p);
        }
        cfg
    }

    /// Runs Phase I for one seed.
    pub fn phase1(&self, instance: &Instance, seed: u64) -> Result<Summary> {
        let monotone = self.monotone_for(instance);
        match self.mode {
            Mode::Centralized => centralized_phase1(
                instance,
                &CentralizedConfig::new(self.epsilon, self.d, seed)
                    .monotone(monotone)
                    .recompute(self.recompute),
            ),
            Mode::Streaming => {
                let order = self.order.resolve(instance.n());
                streaming_phase1(instance, &order, &self.streaming_config(monotone, seed))
            }
        }
    }

    /// `gamma` as used by the streaming bound.
    fn effective_gamma(&self, monotone: bool) -> f64 {
        match (self.gamma, monotone) {
            (Some(g), _) => g,
            (None, true) => 1.0,
            (None, false) => DEFAULT_GAMMA,
        }
    }
}

/// Parses `natural` or `shuffle:seed`.
pub fn parse_order(s: &str) -> Result<ArrivalOrder> {
    match s.trim() {
        "natural" => Ok(ArrivalOrder::Natural),
        other => match other.strip_prefix("shuffle:").map(str::parse) {
            Some(Ok(seed)) => Ok(ArrivalOrder::Shuffle(seed)),
            _ => invalid(format!("bad arrival order `{s}`")),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRow {
    pub strategy: String,
    pub seed: u64,
    pub f_s: f64,
    pub f_a_prime: f64,
    pub opt: f64,
    pub method: OptMethod,
    /// `None` when the optimum is zero.
    pub ratio_ensemble: Option<f64>,
    pub summary_size: usize,
    pub peak_mem: usize,
    pub oracle_calls: u64,
    pub invariants_ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyAggregate {
    pub label: String,
    pub deleted: Vec<ElementId>,
    pub opt: OptValue,
    pub mean_f_s: f64,
    pub min_f_s: f64,
    /// `OPT / mean f(S)`; `None` when `OPT = 0`.
    pub ratio: Option<f64>,
    /// Hoeffding half-width of the mean at confidence `1 − 0.05`, with
    /// `f(S) ∈ [0, OPT]`.
    pub hoeffding: f64,
    /// `OPT ≤ bound · mean · (1 + slack)`; `None` when vacuous or unchecked.
    pub bound_holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<TrialRow>,
    pub aggregates: Vec<StrategyAggregate>,
    pub bound: BoundReport,
    pub slack: f64,
    pub invariant_failures: Vec<String>,
    pub run_dir: Option<PathBuf>,
}

impl ExperimentReport {
    pub fn invariants_ok(&self) -> bool {
        self.rows.iter().all(|r| r.invariants_ok)
    }

    pub fn bounds_ok(&self) -> bool {
        self.aggregates.iter().all(|a| a.bound_holds != Some(false))
    }

    pub fn to_csv(&self) -> Result<String> {
        rows_to_csv(&self.rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "theoretical bound: {:.6}", self.bound.value);
        for w in &self.bound.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        let _ = writeln!(out, "slack: {}", self.slack);
        for a in &self.aggregates {
            let ratio = a.ratio.map_or("vacuous".to_string(), |r| format!("{r:.6}"));
            let verdict = match a.bound_holds {
                Some(true) => "ok",
                Some(false) => "VIOLATED",
                None => "-",
            };
            let _ = writeln!(
                out,
                "{}: D={:?} opt={:.6} ({}) mean_fS={:.6} min_fS={:.6} ratio={ratio} hoeffding={:.6} bound={verdict}",
                a.label, a.deleted, a.opt.value, a.opt.method, a.mean_f_s, a.min_f_s, a.hoeffding
            );
        }
        let _ = writeln!(
            out,
            "invariants: {}",
            if self.invariants_ok() { "ok" } else { "FAILED" }
        );
        for f in &self.invariant_failures {
            let _ = writeln!(out, "  {f}");
        }
        out
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

pub fn rows_to_csv(rows: &[TrialRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS)?;
    for r in rows {
        writer.write_record([
            r.strategy.clone(),
            r.seed.to_string(),
            fmt_f64(r.f_s),
            fmt_f64(r.f_a_prime),
            fmt_f64(r.opt),
            r.method.to_string(),
            r.ratio_ensemble.map_or("vacuous".to_string(), fmt_f64),
            r.summary_size.to_string(),
            r.peak_mem.to_string(),
            r.oracle_calls.to_string(),
            r.invariants_ok.to_string(),
        ])?;
    }
    let body = writer
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv buffer: {e}")))?;
    let mut out = format!("{CSV_SCHEMA}\n");
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

/// Thread cap from `ROBUST_SUMMARY_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&t: &usize| t > 0)
}

struct Scenario {
    label: String,
    deleted: Vec<ElementId>,
    opt: OptValue,
}

struct SeedOutcome {
    rows: Vec<TrialRow>,
    failures: Vec<String>,
}

fn run_seed(config: &ExperimentConfig, instance: &Instance, scenarios: &[Scenario], seed: u64) -> Result<SeedOutcome> {
    let local = instance.fresh();
    let summary = config.phase1(&local, seed)?;
    let phase1_calls = summary.counters.oracle_calls;
    let mut failures = Vec::new();
    let mut summary_ok = true;
    if config.check_invariants {
        let report = verify_summary(
            &summary,
            &local,
            VerifyOptions {
                random_deletions: config.random_deletions,
                seed,
            },
        )?;
        for f in report.failures() {
            summary_ok = false;
            failures.push(format!("seed {seed}: {}: {}", f.name, f.detail));
        }
    }
    let peak_mem = match summary.mode {
        Mode::Centralized => summary.size(),
        Mode::Streaming => summary.counters.peak_memory,
    };
    let mut rows = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        local.objective.reset_queries();
        let sol = phase2(&summary, &s.deleted, &local, config.solver)?;
        let calls = local.objective.queries();
        let mut ok = summary_ok;
        if config.check_invariants {
            let feasible = local.matroid.is_independent(&sol.set)?;
            let survives = sol.set.iter().all(|e| !s.deleted.contains(e));
            let below_opt = s.opt.method != OptMethod::Exhaustive || sol.value <= s.opt.value + 1e-9;
            if !(feasible && survives && below_opt) {
                ok = false;
                failures.push(format!(
                    "seed {seed}, {}: solution feasible={feasible} avoids D={survives} f(S) <= OPT={below_opt}",
                    s.label
                ));
            }
        }
        rows.push(TrialRow {
            strategy: s.label.clone(),
            seed,
            f_s: sol.value,
            f_a_prime: sol.surviving_value,
            opt: s.opt.value,
            method: s.opt.method,
            ratio_ensemble: None,
            summary_size: summary.size(),
            peak_mem,
            oracle_calls: phase1_calls + calls,
            invariants_ok: ok,
        });
    }
    Ok(SeedOutcome { rows, failures })
}

fn scenarios(config: &ExperimentConfig, instance: &Instance) -> Result<Vec<Scenario>> {
    let n = instance.n();
    let mut sets: Vec<(String, Vec<ElementId>)> = Vec::new();
    for s in &config.strategies {
        let d = if matches!(s.strategy, DeletionStrategy::ListFile(_)) {
            config.d
        } else {
            s.d
        };
        sets.push((s.to_string(), choose_deletions(instance, &s.strategy, d)?));
    }
    if config.enumerate {
        let r = config.d.min(n);
        let count = binomial(n, r);
        if count > ENUMERATION_CAP as u128 {
            return invalid(format!("C({n},{r}) = {count} deletion sets exceed the cap of {ENUMERATION_CAP}"));
        }
        for ids in combinations(n, r) {
            let label = format!(
                "explicit:{}",
                ids.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            );
            sets.push((label, ids));
        }
    }
    let oracle = instance.fresh();
    sets.into_iter()
        .map(|(label, deleted)| {
            let method = match config.opt {
                OptChoice::Fixed(m) => m,
                OptChoice::Auto if n - deleted.len() <= EXHAUSTIVE_CAP => OptMethod::Exhaustive,
                OptChoice::Auto => OptMethod::GreedyBound,
            };
            let opt = opt_value(&oracle, &deleted, method)?;
            Ok(Scenario { label, deleted, opt })
        })
        .collect()
}

fn binomial(n: usize, r: usize) -> u128 {
    let r = r.min(n - r.min(n));
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Next unused `run-NNN` directory under `root`.
pub fn next_run_dir(root: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(root)?;
    for i in 0.. {
        let dir = root.join(format!("run-{i:03}"));
        if !dir.exists() {
            std::fs::create_dir(&dir)?;
            return Ok(dir);
        }
    }
    unreachable!("run directories exhausted")
}

/// Runs every (strategy, seed) trial and aggregates per strategy.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let instance = config.instance.load()?;
    let monotone = config.monotone_for(&instance);
    let bound = theoretical_bound(
        config.mode,
        monotone,
        config.solver.beta(),
        config.epsilon,
        config.effective_gamma(monotone),
    );
    let scenarios = scenarios(config, &instance)?;
    let seeds: Vec<u64> = (0..config.trials as u64).map(|i| config.base_seed + i).collect();

    let run = || -> Vec<Result<SeedOutcome>> {
        seeds
            .par_iter()
            .map(|&seed| run_seed(config, &instance, &scenarios, seed))
            .collect()
    };
    let outcomes = match thread_cap() {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };

    let mut per_seed = Vec::with_capacity(outcomes.len());
    let mut first_error = None;
    for outcome in outcomes {
        match outcome {
            Ok(o) => per_seed.push(o),
            Err(e) => {
                first_error = Some(e);
                break;
            }
        }
    }

    let mut aggregates = Vec::new();
    for (i, s) in scenarios.iter().enumerate() {
        let values: Vec<f64> = per_seed.iter().map(|o| o.rows[i].f_s).collect();
        let mean = if values.is_empty() {
            0.0
        } else {
            values.iter().sum::<f64>() / values.len() as f64
        };
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let ratio = (s.opt.value > 0.0).then(|| s.opt.value / mean);
        let hoeffding = if values.is_empty() {
            f64::INFINITY
        } else {
            s.opt.value * ((2.0 / HOEFFDING_DELTA).ln() / (2.0 * values.len() as f64)).sqrt()
        };
        let bound_holds = (config.check_bound && s.opt.value > 0.0)
            .then_some(s.opt.value <= bound.value * mean * (1.0 + config.slack));
        aggregates.push(StrategyAggregate {
            label: s.label.clone(),
            deleted: s.deleted.clone(),
            opt: s.opt.clone(),
            mean_f_s: mean,
            min_f_s: min,
            ratio,
            hoeffding,
            bound_holds,
        });
    }

    let mut rows = Vec::new();
    let mut invariant_failures = Vec::new();
    for (i, _) in scenarios.iter().enumerate() {
        for o in &per_seed {
            let mut row = o.rows[i].clone();
            row.ratio_ensemble = aggregates[i].ratio;
            rows.push(row);
        }
    }
    for o in &per_seed {
        invariant_failures.extend(o.failures.iter().cloned());
    }

    let mut report = ExperimentReport {
        rows,
        aggregates,
        bound,
        slack: config.slack,
        invariant_failures,
        run_dir: None,
    };
    if let Some(root) = &config.output_dir {
        let dir = next_run_dir(root)?;
        std::fs::write(dir.join("results.csv"), report.to_csv()?)?;
        std::fs::write(dir.join("report.txt"), report.to_text())?;
        report.run_dir = Some(dir);
    }
    match first_error {
        Some(e) => Err(e),
        None => Ok(report),
    }
}
