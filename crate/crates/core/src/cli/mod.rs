//! Command-line surface: argument parsing, configuration files, exit codes.
//!
//! Every subcommand accepts the same flags. A JSON file given with
//! `--config` supplies defaults; explicit flags override it. Exit codes:
//! 0 success, 1 a verification criterion failed, 2 configuration error,
//! 3 numerical failure.

mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::boundary::{BoundarySymbol, SigmaSpec};
use crate::density::TestFunction;
use crate::error::{Error, Result};

pub use commands::{
    cmd_cluster_spectrum, cmd_density, cmd_galerkin, cmd_odd_construct, cmd_rho, cmd_sl1d,
    cmd_verify, cmd_weinstein,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CRITERION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "robin-clusters",
    version,
    about = "Robin eigenvalue clusters on the hemisphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Gap spectra of the cluster operators: CSV (ell, k, gap).
    ClusterSpectrum,
    /// Empirical cluster averages against the limit, plus a ρ curve.
    Density,
    /// The limiting density ρ(σ; y) on a grid.
    Rho,
    /// Geodesic-average prediction against the true limit.
    Weinstein,
    /// Full Galerkin spectrum, optionally with a sandwich comparison.
    Galerkin,
    /// 1D Robin and step-potential eigenvalues.
    Sl1d,
    /// Exact eigenfunctions at ℓ(ℓ+1) for odd σ.
    OddConstruct,
    /// Run the acceptance criteria and emit a JSON verdict.
    Verify,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// σ as a file path, inline JSON, or a number for constant σ.
    #[arg(long, global = true)]
    pub sigma: Option<String>,
    #[arg(long, global = true)]
    pub ell: Option<usize>,
    /// a:b:step, inclusive.
    #[arg(long, global = true)]
    pub ladder: Option<String>,
    #[arg(long, global = true)]
    pub lmax: Option<usize>,
    /// Test function: x, x^k, poly(c1,…), each optionally *bump(R).
    #[arg(long, global = true)]
    pub f: Option<String>,
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// ρ grid: lower end.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub y_min: Option<f64>,
    /// ρ grid: upper end.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub y_max: Option<f64>,
    /// ρ grid: number of points.
    #[arg(long, global = true)]
    pub points: Option<usize>,
    /// Comma-separated criterion numbers for verify.
    #[arg(long, global = true, value_delimiter = ',')]
    pub only: Option<Vec<u32>>,
}

/// Entries of a `--config` file. Same names as the flags.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub sigma: Option<serde_json::Value>,
    pub ell: Option<usize>,
    pub ladder: Option<String>,
    pub lmax: Option<usize>,
    pub f: Option<String>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub points: Option<usize>,
    pub only: Option<Vec<u32>>,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub sigma: Option<BoundarySymbol>,
    pub ell: Option<usize>,
    pub ladder: Option<Vec<usize>>,
    pub lmax: Option<usize>,
    pub f: Option<TestFunction>,
    pub epsilon: Option<f64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub seed: Option<u64>,
    pub y_min: Option<f64>,
    pub y_max: Option<f64>,
    pub points: Option<usize>,
    pub only: Vec<u32>,
    /// Echo of the merged parameters for the run manifest.
    pub echo: serde_json::Value,
}

impl RunConfig {
    pub fn sigma(&self) -> Result<&BoundarySymbol> {
        self.sigma
            .as_ref()
            .ok_or_else(|| Error::input("--sigma is required"))
    }

    pub fn ell(&self) -> Result<usize> {
        self.ell.ok_or_else(|| Error::input("--ell is required"))
    }

    pub fn lmax(&self) -> Result<usize> {
        self.lmax.ok_or_else(|| Error::input("--lmax is required"))
    }

    pub fn f(&self) -> Result<&TestFunction> {
        self.f
            .as_ref()
            .ok_or_else(|| Error::input("--f is required"))
    }

    /// --ladder if given, otherwise the single --ell.
    pub fn ells(&self) -> Result<Vec<usize>> {
        match (&self.ladder, self.ell) {
            (Some(l), _) => Ok(l.clone()),
            (None, Some(e)) => Ok(vec![e]),
            (None, None) => Err(Error::input("--ell or --ladder is required")),
        }
    }
}

/// Parses `a:b:step` (inclusive) or `a:b` (step 1).
pub fn parse_ladder(text: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        s.trim().parse::<usize>().map_err(|_| {
            Error::input(format!(
                "ladder `{text}`: `{s}` is not a non-negative integer"
            ))
        })
    };
    let (a, b, step) = match parts.as_slice() {
        [a, b] => (num(a)?, num(b)?, 1),
        [a, b, s] => (num(a)?, num(b)?, num(s)?),
        _ => return Err(Error::input(format!("ladder `{text}`: expected a:b:step"))),
    };
    if step == 0 || b < a {
        return Err(Error::input(format!(
            "ladder `{text}`: need a <= b and step > 0"
        )));
    }
    Ok((a..=b).step_by(step).collect())
}

/// σ from a number, inline JSON or a JSON file path.
pub fn parse_sigma(arg: &str) -> Result<BoundarySymbol> {
    if let Ok(v) = arg.trim().parse::<f64>() {
        if !v.is_finite() {
            return Err(Error::input("sigma: constant must be finite"));
        }
        return Ok(BoundarySymbol::constant(v));
    }
    SigmaSpec::from_arg(arg)?.to_symbol()
}

fn sigma_from_value(v: &serde_json::Value) -> Result<BoundarySymbol> {
    match v {
        serde_json::Value::String(s) => parse_sigma(s),
        serde_json::Value::Number(n) => Ok(BoundarySymbol::constant(
            n.as_f64()
                .ok_or_else(|| Error::input("sigma: bad number"))?,
        )),
        other => serde_json::from_value::<SigmaSpec>(other.clone())
            .map_err(|e| Error::input(format!("sigma JSON: {e}")))?
            .to_symbol(),
    }
}

/// Merges a config file (if any) with flags and validates the result.
pub fn resolve(flags: &Flags) -> Result<RunConfig> {
    let file = match &flags.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::input(format!("config {}: {e}", p.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Error::input(format!("config {}: {e}", p.display())))?
        }
        None => FileConfig::default(),
    };
    let sigma = match (&flags.sigma, &file.sigma) {
        (Some(s), _) => Some(parse_sigma(s)?),
        (None, Some(v)) => Some(sigma_from_value(v)?),
        (None, None) => None,
    };
    let ladder_text = flags.ladder.clone().or(file.ladder);
    let ladder = ladder_text.as_deref().map(parse_ladder).transpose()?;
    let f_text = flags.f.clone().or(file.f);
    let f = f_text.as_deref().map(TestFunction::parse).transpose()?;
    if let Some(f) = &f {
        f.validate()?;
    }
    let epsilon = flags.epsilon.or(file.epsilon);
    if let Some(e) = epsilon {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::input("epsilon must be positive"));
        }
    }
    let jobs = flags.jobs.or(file.jobs);
    if jobs == Some(0) {
        return Err(Error::input("jobs must be at least 1"));
    }
    let points = flags.points.or(file.points);
    if matches!(points, Some(p) if p < 2) {
        return Err(Error::input("points must be at least 2"));
    }
    let cfg = RunConfig {
        sigma,
        ell: flags.ell.or(file.ell),
        ladder,
        lmax: flags.lmax.or(file.lmax),
        f,
        epsilon,
        out: flags.out.clone().or(file.out),
        jobs,
        seed: flags.seed.or(file.seed),
        y_min: flags.y_min.or(file.y_min),
        y_max: flags.y_max.or(file.y_max),
        points,
        only: flags.only.clone().or(file.only).unwrap_or_default(),
        echo: serde_json::Value::Null,
    };
    let echo = serde_json::json!({
        "sigma": cfg.sigma.as_ref().map(|s| s.to_spec()),
        "ell": cfg.ell,
        "ladder": cfg.ladder,
        "lmax": cfg.lmax,
        "f": cfg.f,
        "epsilon": cfg.epsilon,
        "seed": cfg.seed,
        "y_min": cfg.y_min,
        "y_max": cfg.y_max,
        "points": cfg.points,
        "only": cfg.only,
    });
    Ok(RunConfig { echo, ..cfg })
}

fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

/// Runs one subcommand with a resolved configuration.
pub fn dispatch(command: Command, cfg: &RunConfig) -> Result<i32> {
    match command {
        Command::ClusterSpectrum => cmd_cluster_spectrum(cfg),
        Command::Density => cmd_density(cfg),
        Command::Rho => cmd_rho(cfg),
        Command::Weinstein => cmd_weinstein(cfg),
        Command::Galerkin => cmd_galerkin(cfg),
        Command::Sl1d => cmd_sl1d(cfg),
        Command::OddConstruct => cmd_odd_construct(cfg),
        Command::Verify => cmd_verify(cfg),
    }
}

/// Entry point: parses `args` (including the program name) and returns the
/// process exit code. Messages go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match resolve(&cli.flags) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let work = || dispatch(cli.command, &cfg);
    let result = match cfg.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(work),
            Err(e) => Err(Error::input(format!("thread pool: {e}"))),
        },
        None => work(),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
