use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ordered_means::harness::{
    counted_failures, parse_checks, reports_to_csv, reports_to_json, run_suite, TrialConfig,
};
use ordered_means::linalg::{io, SpectralBounds};
use ordered_means::means::{MeanKind, SolverSettings, WeightVector};
use ordered_means::order::thompson_distance;
use ordered_means::param::{parameterize, ExtendedParam};
use ordered_means::scalar::scalar_param_mean;
use ordered_means::MeanError;

#[derive(Parser)]
#[command(name = "ordmean", version, about = "Ordered means of positive-definite matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification checks and write JSON and CSV reports.
    Verify(VerifyArgs),
    /// Evaluate G^μ(ω; A₁, …, Aₙ) on matrix files.
    Mean(MeanArgs),
    /// Distance between two positive-definite matrices.
    Distance(DistanceArgs),
    /// Closed-form G^μ on positive scalars.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// JSON config; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated matrix dimensions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Trials per grid case.
    #[arg(long)]
    trials: Option<usize>,
    /// Spectral bounds as `m,M`.
    #[arg(long)]
    bounds: Option<String>,
    /// Comma-separated check ids, or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    checks: Vec<String>,
    /// Comma-separated mean kinds, e.g. `karcher,power:0.5`.
    #[arg(long, value_delimiter = ',')]
    kinds: Option<Vec<String>>,
    /// Relative Loewner tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for `report.json` and `summary.csv`; without it the CSV
    /// summary goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for inputs of failing trials.
    #[arg(long)]
    dump_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    damping: Option<f64>,
}

impl SolverArgs {
    fn settings(&self) -> Result<SolverSettings, MeanError> {
        let d = SolverSettings::default();
        SolverSettings::new(
            self.tol.unwrap_or(d.tol),
            self.max_iter.unwrap_or(d.max_iter),
            self.damping.unwrap_or(d.damping),
        )
    }
}

#[derive(Args)]
struct MeanArgs {
    /// arithmetic, harmonic, power, karcher, agh (or `power:<p>`).
    kind: String,
    /// Weight file (JSON array); uniform weights when omitted.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Matrix files.
    #[arg(required = true)]
    matrices: Vec<PathBuf>,
    /// Parameter μ; accepts `inf` and `-inf`.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    mu: ExtendedParam,
    /// Power-mean exponent for kind `power`.
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Metric {
    Thompson,
}

#[derive(Args)]
struct DistanceArgs {
    #[arg(long, value_enum, default_value = "thompson")]
    metric: Metric,
    a: PathBuf,
    b: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    kind: String,
    /// Comma-separated weights; uniform when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    weights: Option<Vec<f64>>,
    /// Comma-separated positive scalars.
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    mu: ExtendedParam,
    #[arg(long, allow_hyphen_values = true)]
    p: Option<f64>,
}

/// Exit status 1 (failed checks, non-convergence) or 2 (bad input).
enum Failure {
    Checks,
    Solver(anyhow::Error),
    Input(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

fn mean_failure(e: MeanError) -> Failure {
    match e {
        MeanError::NonConvergence { .. } => Failure::Solver(e.into()),
        e => Failure::Input(e.into()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Mean(a) => mean(a),
        Command::Distance(a) => distance(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<(), Failure> {
    let mut cfg = match &a.config {
        Some(path) => TrialConfig::from_json(&read(path)?).map_err(anyhow::Error::from)?,
        None => TrialConfig::default(),
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(dims) = a.dims {
        cfg.dims = dims;
    }
    if let Some(trials) = a.trials {
        cfg.trials_per_case = trials;
    }
    if let Some(b) = &a.bounds {
        cfg.bounds = parse_bounds(b)?;
    }
    if let Some(kinds) = &a.kinds {
        cfg.mean_kinds = kinds
            .iter()
            .map(|k| k.parse::<MeanKind>())
            .collect::<Result<_, _>>()
            .map_err(anyhow::Error::from)?;
    }
    if let Some(tol) = a.tol {
        cfg.rel_tol = tol;
    }
    if a.dump_dir.is_some() {
        cfg.dump_dir = a.dump_dir.clone();
    }
    let checks = parse_checks(&a.checks).map_err(anyhow::Error::from)?;
    let reports = run_suite(&cfg, &checks).map_err(anyhow::Error::from)?;

    for r in &reports {
        let verdict = if r.passed() { "pass" } else if r.exploratory { "info" } else { "FAIL" };
        eprintln!(
            "{verdict} {} records={} failures={}",
            r.label(),
            r.summary.records,
            r.failures()
        );
    }
    let csv = reports_to_csv(&reports);
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            write(&dir.join("report.json"), &reports_to_json(&reports, true))?;
            write(&dir.join("summary.csv"), &csv)?;
        }
        None => print!("{csv}"),
    }
    if counted_failures(&reports) == 0 {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn mean(a: MeanArgs) -> Result<(), Failure> {
    let kind = resolve_kind(&a.kind, a.p)?;
    let settings = a.solver.settings().map_err(anyhow::Error::from)?;
    let mats = a
        .matrices
        .iter()
        .map(|p| io::parse_spd(&read(p)?).with_context(|| format!("parsing {}", p.display())))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let w = match &a.weights {
        Some(p) => {
            let raw = io::parse_weights(&read(p)?).with_context(|| format!("parsing {}", p.display()))?;
            WeightVector::new(raw).map_err(anyhow::Error::from)?
        }
        None => WeightVector::uniform(mats.len()).map_err(anyhow::Error::from)?,
    };
    let m = parameterize(kind, a.mu, &w, &mats, &settings).map_err(mean_failure)?;
    let text = io::write_matrix(m.matrix()).map_err(|e| anyhow!(e))?;
    emit(a.out.as_deref(), &text)
}

fn distance(a: DistanceArgs) -> Result<(), Failure> {
    let load = |p: &Path| -> anyhow::Result<_> {
        io::parse_spd(&read(p)?).with_context(|| format!("parsing {}", p.display()))
    };
    let (x, y) = (load(&a.a)?, load(&a.b)?);
    let d = match a.metric {
        Metric::Thompson => thompson_distance(&x, &y).map_err(anyhow::Error::from)?,
    };
    println!("{d:.16e}");
    Ok(())
}

fn oracle(a: OracleArgs) -> Result<(), Failure> {
    let kind = resolve_kind(&a.kind, a.p)?;
    let w = match a.weights {
        Some(w) => WeightVector::new(w),
        None => WeightVector::uniform(a.values.len()),
    }
    .map_err(anyhow::Error::from)?;
    let x = scalar_param_mean(kind, a.mu, &w, &a.values).map_err(anyhow::Error::from)?;
    println!("{x:.16e}");
    Ok(())
}

fn resolve_kind(name: &str, p: Option<f64>) -> anyhow::Result<MeanKind> {
    match (name.trim().to_ascii_lowercase().as_str(), p) {
        ("power", Some(p)) => Ok(MeanKind::power(p)?),
        ("power", None) => Err(anyhow!("kind `power` needs --p")),
        (_, Some(_)) => Err(anyhow!("--p only applies to kind `power`")),
        (other, None) => Ok(other.parse()?),
    }
}

fn parse_bounds(s: &str) -> anyhow::Result<SpectralBounds> {
    let (m, big_m) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("--bounds expects `m,M`, got {s:?}"))?;
    Ok(SpectralBounds::new(m.trim().parse()?, big_m.trim().parse()?)?)
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write(p, text)?,
        None => println!("{text}"),
    }
    Ok(())
}
