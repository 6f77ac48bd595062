use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qlss::algorithms::NormMethod;
use qlss_cli::{run, CliError, CliResult, Command, InstanceSource, RunConfig, Solver};

#[derive(Parser)]
#[command(name = "qlss", version, about = "Classical simulator for kernel-reflection linear system solvers")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a solver and measure its expected query count.
    Solve(Flags),
    /// Run a norm estimator (exhaustive, binary, adiabatic, ae-refine).
    NormEst(Flags),
    /// Success probability vs t/|x| curves.
    #[command(name = "sweep-fig2")]
    SweepCurves(Flags),
    /// Assemble every block-encoding circuit and compare with its target.
    VerifyCircuits(Flags),
    /// Closed-form query bounds of all solvers.
    BenchBounds(Flags),
    /// Generate the norm-estimation hard instances.
    HardInstance(Flags),
}

#[derive(Args)]
struct Flags {
    /// JSON run config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Output directory; without it the primary CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, conflicts_with = "sampled")]
    exact: bool,
    #[arg(long)]
    sampled: bool,
    /// `.qlsi` instance file.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    /// Norm estimate t.
    #[arg(long)]
    t: Option<f64>,
    /// Instance dimension.
    #[arg(long)]
    n: Option<usize>,
    /// known-norm | random-t | fpaa | optimal
    #[arg(long)]
    solver: Option<String>,
    /// exhaustive | binary | adiabatic | ae-refine
    #[arg(long)]
    method: Option<String>,
}

fn named<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> CliResult<T> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| CliError::Config(format!("unknown {what} `{s}`")))
}

fn build_config(f: Flags) -> CliResult<RunConfig> {
    let mut cfg = match &f.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = f.seed {
        cfg.seed = v;
    }
    if let Some(v) = f.trials {
        cfg.trials = v;
    }
    if f.out.is_some() {
        cfg.out = f.out;
    }
    if f.exact {
        cfg.sampled = false;
    }
    if f.sampled {
        cfg.sampled = true;
    }
    if let Some(p) = f.instance {
        cfg.instance = Some(InstanceSource::File(p));
    }
    let p = &mut cfg.params;
    if let Some(v) = f.kappa {
        p.kappa = v;
    }
    if let Some(v) = f.eps {
        p.eps = v;
    }
    if let Some(v) = f.eta {
        p.eta = v;
    }
    if f.t.is_some() {
        p.t = f.t;
    }
    if let Some(v) = f.n {
        p.n = v;
    }
    if let Some(s) = f.solver {
        p.solver = named::<Solver>("solver", &s)?;
    }
    if let Some(s) = f.method {
        p.method = named::<NormMethod>("method", &s)?;
    }
    Ok(cfg)
}

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("QLSS_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("QLSS_THREADS = `{v}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn execute(cli: Cli) -> CliResult<()> {
    init_threads()?;
    let (command, flags) = match cli.cmd {
        Cmd::Solve(f) => (Command::Solve, f),
        Cmd::NormEst(f) => (Command::NormEst, f),
        Cmd::SweepCurves(f) => (Command::SweepCurves, f),
        Cmd::VerifyCircuits(f) => (Command::VerifyCircuits, f),
        Cmd::BenchBounds(f) => (Command::BenchBounds, f),
        Cmd::HardInstance(f) => (Command::HardInstance, f),
    };
    let cfg = build_config(flags)?;
    let out = run(command, &cfg)?;
    match &cfg.out {
        Some(dir) => out.write_to(dir),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(out.primary().as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = serde_json::json!({ "error": "usage_error", "message": e.to_string().trim() });
            eprintln!("{msg}");
            return ExitCode::from(2);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::FAILURE
        }
    }
}
