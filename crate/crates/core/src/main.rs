use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::debug;

use schro_core::cli::{self, Command, MethodName, RecoveryName, RunConfig, TimeSpec};
use schro_core::SchroError;

#[derive(Parser)]
#[command(
    name = "schro",
    version,
    about = "Linear solves, eigenvalues and ODE evolution via simulated Schrödingerisation"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Solve A y = b through a stationary splitting.
    Solve(Common),
    /// Estimate the dominant eigenvalue of C.
    Eig(Common),
    /// Evolve dx/dt = (C - I)x to an explicit time.
    Evolve(Common),
    /// Spectral diagnostics and predicted stopping time, without evolving.
    Diagnose(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Jacobi,
    Richardson,
    DampedJacobi,
}

#[derive(Clone, Copy, ValueEnum)]
enum Recovery {
    AtPstar,
    SumPositive,
}

#[derive(Args)]
struct Common {
    /// Matrix Market file with A (solve, diagnose) or C (eig, evolve).
    #[arg(long)]
    matrix: PathBuf,
    /// JSON vector b.
    #[arg(long)]
    rhs: Option<PathBuf>,
    /// JSON initial vector (y0 for solve and diagnose, x0 otherwise).
    #[arg(long)]
    x0: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "jacobi")]
    method: Method,
    /// Splitting parameter for richardson and damped-jacobi.
    #[arg(long)]
    a: Option<f64>,
    /// Grid points (power of two).
    #[arg(long, default_value_t = 512)]
    n: usize,
    /// Half-width of the p domain; chosen from t when absent.
    #[arg(long)]
    l: Option<f64>,
    /// Evolution time or "auto".
    #[arg(long, default_value = "auto")]
    t: TimeSpec,
    #[arg(long, default_value_t = 1e-3)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, value_enum, default_value = "at-pstar")]
    recovery: Recovery,
    #[arg(long)]
    pstar: Option<f64>,
    /// Report destination; standard output when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for a random initial vector when none is given.
    #[arg(long)]
    seed: Option<u64>,
    /// Accept a non-dominant A if r(G) < 1.
    #[arg(long)]
    allow_non_dominant: bool,
    /// Include the oracle eigen-overlaps in the report.
    #[arg(long)]
    show_overlaps: bool,
    /// Include wall time (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
    /// Overlap |a0|^2 used by diagnose instead of the oracle value.
    #[arg(long)]
    alpha0_sq: Option<f64>,
}

fn config(command: Command, c: Common) -> RunConfig {
    RunConfig {
        command,
        matrix_path: c.matrix,
        rhs_path: c.rhs,
        x0_path: c.x0,
        method: match c.method {
            Method::Jacobi => MethodName::Jacobi,
            Method::Richardson => MethodName::Richardson,
            Method::DampedJacobi => MethodName::DampedJacobi,
        },
        a: c.a,
        n: c.n,
        l: c.l,
        t: c.t,
        delta: c.delta,
        epsilon: c.epsilon,
        recovery: match c.recovery {
            Recovery::AtPstar => RecoveryName::AtPstar,
            Recovery::SumPositive => RecoveryName::SumPositive,
        },
        pstar: c.pstar,
        output_path: c.output,
        seed: c.seed,
        allow_non_dominant: c.allow_non_dominant,
        show_overlaps: c.show_overlaps,
        timing: c.timing,
        alpha0_sq: c.alpha0_sq,
    }
}

fn configure_threads() -> Result<(), SchroError> {
    let Ok(raw) = std::env::var("SCHRO_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .map_err(|_| SchroError::InvalidArgument(format!("SCHRO_THREADS must be a count, got '{raw}'")))?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| SchroError::InvalidArgument(format!("cannot size thread pool: {e}")))?;
        debug!("using {threads} worker threads");
    }
    Ok(())
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), SchroError> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let parsed = Cli::parse();
    let cfg = match parsed.command {
        Sub::Solve(c) => config(Command::Solve, c),
        Sub::Eig(c) => config(Command::Eig, c),
        Sub::Evolve(c) => config(Command::Evolve, c),
        Sub::Diagnose(c) => config(Command::Diagnose, c),
    };
    let result =
        configure_threads().and_then(|()| cli::run(&cfg)).and_then(|r| emit(&r.render(), cfg.output_path.as_ref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            let doc = cli::render_error(&err);
            if emit(&doc, cfg.output_path.as_ref()).is_err() {
                print!("{doc}");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
