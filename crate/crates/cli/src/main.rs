use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ringlll::bounds::DEFAULT_SEARCH_BOUND;
use ringlll::experiment::{prepare, ExperimentConfig, Model, DEFAULT_BETA, DEFAULT_REPS, DEFAULT_STEPS};
use ringlll::game::efficiency;
use ringlll::oracle::{ResistanceModel, DEFAULT_ENUMERATION_CAP};
use ringlll::{GameParams, Policy, RingGraph};

mod output;
mod rows;
mod sweep;

use output::{base_meta, open_csv, sig6, write_sidecar};

#[derive(Parser)]
#[command(name = "ringlll", version, about = "Adversarial log-linear learning on ring graphs")]
struct Cli {
    /// Worker threads for repetitions and sweep rows.
    #[arg(long, global = true, env = "RINGLLL_WORKERS")]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one configuration and write a result row.
    Simulate(SimulateArgs),
    /// Tabulate efficiency bounds for all four models.
    Bounds(BoundsArgs),
    /// List the stochastically stable states of a small ring.
    Oracle(OracleArgs),
    /// Run a parameter sweep from a TOML file or a preset.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    #[value(name = "SU", alias = "su")]
    Su,
    #[value(name = "SI", alias = "si")]
    Si,
    #[value(name = "DU", alias = "du")]
    Du,
    #[value(name = "DI", alias = "di")]
    Di,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Su => Model::Su,
            ModelArg::Si => Model::Si,
            ModelArg::Du => Model::Du,
            ModelArg::Di => Model::Di,
        }
    }
}

#[derive(Args, Clone)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    gamma: f64,
    /// Deterministic share for DU (default gamma / 2).
    #[arg(long)]
    gamma_prime: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_BETA)]
    beta: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: u64,
    #[arg(long, default_value_t = 0)]
    burn_in: u64,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Run-length target such as x2y5, repeated to fill the ring (SI, DI).
    #[arg(long)]
    target: Option<String>,
}

impl ExperimentArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            model: self.model.into(),
            n: self.n,
            k: self.k,
            alpha: self.alpha,
            gamma: self.gamma,
            gamma_prime: self.gamma_prime,
            beta: self.beta,
            steps: self.steps,
            burn_in: self.burn_in,
            reps: self.reps,
            seed: self.seed,
            target: self.target.clone(),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    exp: ExperimentArgs,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    /// Values or ranges, e.g. 0.3,0.5 or 0:1:0.05.
    #[arg(long, default_value = "0.5")]
    alpha: String,
    #[arg(long, default_value = "0:1:0.05")]
    gamma: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BOUND)]
    search_bound: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleModel {
    #[value(name = "none")]
    None,
    #[value(name = "SU", alias = "su")]
    Su,
    #[value(name = "SI", alias = "si")]
    Si,
    #[value(name = "DU", alias = "du")]
    Du,
    #[value(name = "DI", alias = "di")]
    Di,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    model: OracleModel,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    #[arg(long)]
    gamma_prime: Option<f64>,
    #[arg(long)]
    target: Option<String>,
    /// Largest n to enumerate (at most 30).
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: usize,
    /// Leave out the i-th defensive adversary of the DI policy.
    #[arg(long)]
    drop_defender: Option<usize>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML sweep description.
    config: Option<PathBuf>,
    #[arg(long, value_parser = ["table"], conflicts_with = "config")]
    preset: Option<String>,
    #[arg(long)]
    output: PathBuf,
}

/// Parses `a,b,c` or `start:stop:step` (inclusive).
fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Vec::new());
    }
    if spec.contains(':') {
        let parts: Vec<f64> = spec
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad range {spec:?}"))?;
        let [start, stop, step] = parts[..] else {
            bail!("range {spec:?} must be start:stop:step");
        };
        if step <= 0.0 || stop < start {
            bail!("range {spec:?} needs step > 0 and stop >= start");
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=count).map(|i| start + i as f64 * step).collect());
    }
    spec.split(',')
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number {p:?}")))
        .collect()
}

fn simulate(args: &SimulateArgs) -> Result<()> {
    let cfg = args.exp.config();
    // surface configuration and feasibility errors before simulating
    prepare(&cfg)?;
    let start = Instant::now();
    let row = rows::simulate_row(&cfg);
    let status = row.last().cloned().unwrap_or_default();
    if status != "ok" {
        bail!("{status}");
    }
    let get = |col: &str| {
        let i = rows::SIM_HEADER.iter().position(|h| *h == col).expect("column");
        row[i].clone()
    };
    println!(
        "{} n={} alpha={} gamma={}: mean efficiency {} (std error {}) target {}",
        cfg.model,
        cfg.n,
        sig6(cfg.alpha),
        sig6(cfg.gamma),
        get("mean_efficiency"),
        get("std_error"),
        if get("target").is_empty() { "-".into() } else { get("target") }
    );
    if let Some(out) = &args.output {
        let mut w = open_csv(out, rows::SIM_HEADER, false)?;
        w.write_record(&row)?;
        w.flush()?;
        let mut meta = base_meta("simulate");
        meta.push(("elapsed_s", format!("{:.3}", start.elapsed().as_secs_f64())));
        write_sidecar(out, &meta)?;
    }
    Ok(())
}

fn bounds(args: &BoundsArgs) -> Result<()> {
    let alphas = parse_grid(&args.alpha)?;
    let gammas = parse_grid(&args.gamma)?;
    if alphas.is_empty() || gammas.is_empty() {
        bail!("alpha and gamma grids must be non-empty");
    }
    let mut all = Vec::new();
    for &a in &alphas {
        for &g in &gammas {
            all.extend(rows::bounds_rows(&Model::ALL, a, g, args.k, args.search_bound));
        }
    }
    match &args.output {
        Some(out) => {
            let mut w = open_csv(out, rows::BOUNDS_HEADER, false)?;
            for r in &all {
                w.write_record(r)?;
            }
            w.flush()?;
            let mut meta = base_meta("bounds");
            meta.push(("alpha", args.alpha.clone()));
            meta.push(("gamma", args.gamma.clone()));
            meta.push(("k", args.k.to_string()));
            meta.push(("search_bound", args.search_bound.to_string()));
            write_sidecar(out, &meta)?;
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(rows::BOUNDS_HEADER)?;
            for r in &all {
                w.write_record(r)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn oracle(args: &OracleArgs) -> Result<()> {
    let (g, p, policy) = match args.model {
        OracleModel::None => (RingGraph::new(args.n, args.k)?, GameParams::new(args.alpha)?, Policy::None),
        m => {
            let model = match m {
                OracleModel::Su => Model::Su,
                OracleModel::Si => Model::Si,
                OracleModel::Du => Model::Du,
                _ => Model::Di,
            };
            let mut cfg = ExperimentConfig::new(model, args.n, args.alpha, args.gamma);
            cfg.k = args.k;
            cfg.gamma_prime = args.gamma_prime;
            cfg.target = args.target.clone();
            let prep = prepare(&cfg)?;
            (prep.graph, prep.params, prep.policy)
        }
    };
    let policy = match (args.drop_defender, policy) {
        (None, pol) => pol,
        (Some(i), Policy::Aggressive(pol)) => {
            let slots = pol.defensive_slots();
            let Some(&slot) = slots.get(i) else {
                bail!("policy has {} defensive adversaries, cannot drop #{i}", slots.len());
            };
            Policy::Aggressive(pol.without_slot(slot))
        }
        (Some(_), _) => bail!("--drop-defender applies to the DI model only"),
    };
    let model = ResistanceModel::build(&g, &p, &policy, args.cap)?;
    let stable = model.stable_classes();
    println!("recurrent classes: {}", model.classes.len());
    println!(
        "psi: {}",
        model.psi.iter().map(|v| sig6(*v)).collect::<Vec<_>>().join(" ")
    );
    let mut rows = Vec::new();
    for &c in &stable {
        for a in model.class_profiles(c) {
            rows.push((a.to_string(), efficiency(&g, &p, &a), c, model.psi[c]));
        }
    }
    let min_eff = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    println!("stochastically stable states: {}", rows.len());
    for (a, e, c, _) in &rows {
        println!("  {a}  efficiency {}  class {c}", sig6(*e));
    }
    println!("min efficiency: {}", sig6(min_eff));
    if let Some(out) = &args.output {
        let mut w = open_csv(out, &["profile", "efficiency", "class", "psi"], false)?;
        for (a, e, c, psi) in &rows {
            w.write_record([a.clone(), sig6(*e), c.to_string(), sig6(*psi)])?;
        }
        w.flush()?;
        let mut meta = base_meta("oracle");
        meta.push(("n", args.n.to_string()));
        meta.push(("alpha", sig6(args.alpha)));
        meta.push(("gamma", sig6(args.gamma)));
        meta.push(("classes", model.classes.len().to_string()));
        meta.push(("min_efficiency", sig6(min_eff)));
        write_sidecar(out, &meta)?;
    }
    Ok(())
}

fn run_sweep(args: &SweepArgs) -> Result<()> {
    let (text, source) = match (&args.config, &args.preset) {
        (Some(path), _) => (
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
            path.display().to_string(),
        ),
        (None, Some(_)) => (sweep::TABLE_PRESET.to_string(), "preset:table".to_string()),
        (None, None) => bail!("give a config file or --preset"),
    };
    let cfg = sweep::parse(&text).map_err(|e| ConfigError(format!("{source}: {e}")))?;
    let report = sweep::run(&cfg, &args.output, &source)?;
    println!(
        "{} rows written, {} already present, output {}",
        report.written,
        report.skipped,
        args.output.display()
    );
    Ok(())
}

#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use ringlll::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::InsufficientBudget { .. } | E::ShortXSegment(_) | E::ShortYSegment { .. }) => 3,
        Some(E::EnumerationCap { .. }) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: --workers must be at least 1");
            return ExitCode::from(2);
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
    let res = match &cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Bounds(a) => bounds(a),
        Command::Oracle(a) => oracle(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = exit_code(&e);
            if code == 4 {
                eprintln!("hint: exact analysis enumerates 2^n profiles; reduce --n or raise --cap (at most 30)");
            }
            ExitCode::from(code)
        }
    }
}
