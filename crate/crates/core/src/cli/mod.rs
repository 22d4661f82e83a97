//! Command pipelines behind the `schro` binary: configuration, file
//! ingestion and JSON reports.

mod matrix_market;
mod vector;

pub use matrix_market::{parse_matrix_market, read_matrix_market, write_matrix_market};
pub use vector::{parse_vector, read_vector, vector_to_json};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::baselines::exact_propagator;
use crate::error::{Result, SchroError};
use crate::linalg::{
    ensure_square, fidelity, general_eigen, spectrum, steady_gap, ComplexMatrix, ComplexVector, SpectrumReport,
};
use crate::schrodingerization::{propagate_with, DriftShift, GridSummary, PropagateOptions, RecoveryMode};
use crate::solvers::{
    build_splitting, estimate_tf, iteration_matrix, quantum_cost_estimate, quantum_jacobi_solve, quantum_power_method,
    CostReport, GridSpec, PowerOptions, SolveOptions, SplittingMethod,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Solve,
    Eig,
    Evolve,
    Diagnose,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodName {
    Jacobi,
    Richardson,
    DampedJacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecoveryName {
    AtPstar,
    SumPositive,
}

/// Evolution time: a fixed value or the stopping-time estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    Auto,
    Fixed(f64),
}

impl FromStr for TimeSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TimeSpec::Auto);
        }
        match s.parse::<f64>() {
            Ok(t) if t >= 0.0 && t.is_finite() => Ok(TimeSpec::Fixed(t)),
            _ => Err(format!("expected a nonnegative number or 'auto', got '{s}'")),
        }
    }
}

impl fmt::Display for TimeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TimeSpec::Auto => f.write_str("auto"),
            TimeSpec::Fixed(t) => write!(f, "{t}"),
        }
    }
}

impl Serialize for TimeSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TimeSpec::Auto => s.serialize_str("auto"),
            TimeSpec::Fixed(t) => s.serialize_f64(*t),
        }
    }
}

impl TimeSpec {
    fn fixed(self) -> Option<f64> {
        match self {
            TimeSpec::Auto => None,
            TimeSpec::Fixed(t) => Some(t),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub matrix_path: PathBuf,
    pub rhs_path: Option<PathBuf>,
    pub x0_path: Option<PathBuf>,
    pub method: MethodName,
    pub a: Option<f64>,
    pub n: usize,
    pub l: Option<f64>,
    pub t: TimeSpec,
    pub delta: f64,
    pub epsilon: f64,
    pub recovery: RecoveryName,
    pub pstar: Option<f64>,
    pub output_path: Option<PathBuf>,
    pub seed: Option<u64>,
    pub allow_non_dominant: bool,
    pub show_overlaps: bool,
    pub timing: bool,
    /// Overrides the oracle overlap in `diagnose`.
    pub alpha0_sq: Option<f64>,
}

impl RunConfig {
    pub fn new(command: Command, matrix_path: impl Into<PathBuf>) -> RunConfig {
        RunConfig {
            command,
            matrix_path: matrix_path.into(),
            rhs_path: None,
            x0_path: None,
            method: MethodName::Jacobi,
            a: None,
            n: crate::solvers::DEFAULT_POINTS,
            l: None,
            t: TimeSpec::Auto,
            delta: 1e-3,
            epsilon: 0.1,
            recovery: RecoveryName::AtPstar,
            pstar: None,
            output_path: None,
            seed: None,
            allow_non_dominant: false,
            show_overlaps: false,
            timing: false,
            alpha0_sq: None,
        }
    }

    fn splitting_method(&self) -> Result<SplittingMethod> {
        let need = |name: &str| {
            self.a.ok_or_else(|| SchroError::InvalidArgument(format!("method {name} needs the parameter a")))
        };
        Ok(match self.method {
            MethodName::Jacobi => SplittingMethod::Jacobi,
            MethodName::Richardson => SplittingMethod::Richardson { a: need("richardson")? },
            MethodName::DampedJacobi => SplittingMethod::DampedJacobi { a: need("damped_jacobi")? },
        })
    }

    fn recovery_mode(&self) -> RecoveryMode {
        match self.recovery {
            RecoveryName::AtPstar => RecoveryMode::AtPstar { pstar: self.pstar.unwrap_or(1.0) },
            RecoveryName::SumPositive => RecoveryMode::SumPositive,
        }
    }

    fn grid_spec(&self) -> GridSpec {
        GridSpec { n: self.n, half_width: self.l }
    }

    fn rng(&self) -> Option<ChaCha8Rng> {
        self.seed.map(ChaCha8Rng::seed_from_u64)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Echo {
    pub config: RunConfig,
    /// Input matrix in Matrix Market form.
    pub matrix: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: &'static str,
    pub command: Command,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stopping_time: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fidelity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub success_probability: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "complex_option")]
    pub eigenvalue_estimate: Option<Complex64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cost: Option<CostReport>,
    pub details: Value,
    pub echo: Echo,
    /// Only present when timing is requested, so reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

fn complex_option<S: Serializer>(z: &Option<Complex64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match z {
        Some(z) => s.collect_seq([z.re, z.im]),
        None => s.serialize_none(),
    }
}

impl RunReport {
    fn new(cfg: &RunConfig, matrix: &ComplexMatrix, details: Value) -> RunReport {
        RunReport {
            version: VERSION,
            command: cfg.command,
            grid: None,
            stopping_time: None,
            fidelity: None,
            residual: None,
            success_probability: None,
            eigenvalue_estimate: None,
            cost: None,
            details,
            echo: Echo { config: cfg.clone(), matrix: write_matrix_market(matrix) },
            wall_time_seconds: None,
        }
    }

    /// Pretty JSON with a trailing newline.
    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialisation");
        text.push('\n');
        text
    }
}

/// Machine-readable error document.
pub fn render_error(err: &SchroError) -> String {
    let doc = serde_json::json!({ "error": { "code": err.code(), "message": err.to_string() } });
    let mut text = serde_json::to_string_pretty(&doc).expect("error serialisation");
    text.push('\n');
    text
}

pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    let start = Instant::now();
    let mut report = match cfg.command {
        Command::Solve => run_solve(cfg),
        Command::Eig => run_eig(cfg),
        Command::Evolve => run_evolve(cfg),
        Command::Diagnose => run_diagnose(cfg),
    }?;
    if cfg.timing {
        report.wall_time_seconds = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

fn ones(d: usize) -> ComplexVector {
    ComplexVector::from_element(d, Complex64::ONE)
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector::from_fn(d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
}

fn require_len(v: &ComplexVector, d: usize, what: &str) -> Result<()> {
    if v.len() != d {
        return Err(SchroError::DimensionMismatch(format!("{what} has length {} but the matrix is {d}x{d}", v.len())));
    }
    Ok(())
}

pub fn run_solve(cfg: &RunConfig) -> Result<RunReport> {
    let a = read_matrix_market(&cfg.matrix_path)?;
    let d = ensure_square(&a)?;
    let rhs = cfg.rhs_path.as_ref().ok_or_else(|| SchroError::InvalidArgument("solve needs --rhs".into()))?;
    let b = read_vector(rhs)?;
    require_len(&b, d, "right-hand side")?;
    // Initial guess: file, seeded random draw, or zero.
    let y0 = match (&cfg.x0_path, cfg.rng()) {
        (Some(path), _) => read_vector(path)?,
        (None, Some(mut rng)) => random_vector(&mut rng, d),
        (None, None) => ComplexVector::zeros(d),
    };
    require_len(&y0, d, "initial guess")?;
    let options = SolveOptions {
        method: cfg.splitting_method()?,
        delta: cfg.delta,
        grid: cfg.grid_spec(),
        time: cfg.t.fixed(),
        recovery: cfg.recovery_mode(),
        allow_non_dominant: cfg.allow_non_dominant,
    };
    let r = quantum_jacobi_solve(&a, &b, &y0, &options)?;
    let mut details = serde_json::json!({
        "y": vector_to_json(&r.y_classical),
        "state": vector_to_json(&r.state),
        "y_state": vector_to_json(&r.y_state),
        "augmented_fidelity": r.augmented_fidelity,
        "spectral_radius": r.spectral_radius,
        "gap": r.convergence.gap,
        "t_f_estimate": r.convergence.t_out,
        "delta": cfg.delta,
        "delta_augmented": r.delta_augmented,
        "drift_shift": r.drift_shift,
    });
    if cfg.show_overlaps {
        details["overlaps"] = serde_json::json!(r.convergence.overlaps);
    }
    let mut report = RunReport::new(cfg, &a, details);
    report.grid = Some(r.grid);
    report.stopping_time = Some(r.t_f_used);
    report.fidelity = Some(r.fidelity);
    report.residual = Some(r.residual);
    report.success_probability = Some(r.success_probability);
    report.cost = Some(r.cost);
    Ok(report)
}

pub fn run_eig(cfg: &RunConfig) -> Result<RunReport> {
    let c = read_matrix_market(&cfg.matrix_path)?;
    let d = ensure_square(&c)?;
    let x0 = match (&cfg.x0_path, cfg.rng()) {
        (Some(path), _) => read_vector(path)?,
        (None, Some(mut rng)) => random_vector(&mut rng, d),
        (None, None) => ones(d),
    };
    require_len(&x0, d, "initial vector")?;
    let options = PowerOptions {
        epsilon: cfg.epsilon,
        grid: cfg.grid_spec(),
        time: cfg.t.fixed(),
        recovery: cfg.recovery_mode(),
        ..PowerOptions::default()
    };
    let r = quantum_power_method(&c, &x0, &options)?;
    let mut details = serde_json::json!({
        "state": vector_to_json(&r.state),
        "eigenvalue_oracle": [r.eigenvalue_oracle.re, r.eigenvalue_oracle.im],
        "eigenvalue_error_bound": r.eigenvalue_error_bound,
        "t_max_estimate": r.convergence.t_out,
        "gap": r.convergence.gap,
        "delta": r.convergence.delta,
        "epsilon": cfg.epsilon,
    });
    if cfg.show_overlaps {
        details["overlaps"] = serde_json::json!(r.convergence.overlaps);
    }
    let mut report = RunReport::new(cfg, &c, details);
    report.grid = Some(r.grid);
    report.stopping_time = Some(r.t_max_used);
    report.fidelity = Some(r.fidelity);
    report.success_probability = Some(r.success_probability);
    report.eigenvalue_estimate = Some(r.eigenvalue_estimate);
    report.cost = Some(r.cost);
    Ok(report)
}

pub fn run_evolve(cfg: &RunConfig) -> Result<RunReport> {
    let c = read_matrix_market(&cfg.matrix_path)?;
    let d = ensure_square(&c)?;
    let t = cfg.t.fixed().ok_or_else(|| SchroError::InvalidArgument("evolve needs an explicit --t".into()))?;
    let x0 = match (&cfg.x0_path, cfg.rng()) {
        (Some(path), _) => read_vector(path)?,
        (None, Some(mut rng)) => random_vector(&mut rng, d),
        (None, None) => return Err(SchroError::InvalidArgument("evolve needs --x0".into())),
    };
    require_len(&x0, d, "initial vector")?;
    let grid = cfg.grid_spec().resolve(&c, t, DriftShift::default())?;
    let options = PropagateOptions { recovery: cfg.recovery_mode(), ..PropagateOptions::default() };
    let run = propagate_with(&c, &x0, t, &grid, &options)?;
    let exact = exact_propagator(&c, &x0, t)?;
    let fid = fidelity(&run.recovered.state, &exact);
    let relative_error = (&run.recovered.x - &exact).norm() / exact.norm().max(f64::MIN_POSITIVE);
    let details = serde_json::json!({
        "x": vector_to_json(&run.recovered.x),
        "state": vector_to_json(&run.recovered.state),
        "exact": vector_to_json(&exact),
        "relative_error": relative_error,
        "drift_shift": run.drift_shift,
        "pstar_used": run.recovered.pstar_used,
    });
    let mut report = RunReport::new(cfg, &c, details);
    report.grid = Some(grid.summary());
    report.stopping_time = Some(t);
    report.fidelity = Some(fid);
    report.success_probability = Some(run.recovered.success_probability);
    Ok(report)
}

#[derive(Debug, Clone, Serialize)]
struct Diagnosis {
    matrix: SpectrumReport,
    iteration: SpectrumReport,
    convergent: bool,
    augmented_gap: f64,
    alpha0_sq: f64,
    delta: f64,
    t_f: Option<f64>,
}

/// Spectral diagnostics, recommended grid, predicted t_f and cost, with no
/// evolution.
pub fn run_diagnose(cfg: &RunConfig) -> Result<RunReport> {
    let a = read_matrix_market(&cfg.matrix_path)?;
    let d = ensure_square(&a)?;
    let b = match &cfg.rhs_path {
        Some(path) => read_vector(path)?,
        None => ones(d),
    };
    require_len(&b, d, "right-hand side")?;
    let y0 = match &cfg.x0_path {
        Some(path) => read_vector(path)?,
        None => ComplexVector::zeros(d),
    };
    require_len(&y0, d, "initial guess")?;
    let splitting = build_splitting(&a, &b, cfg.splitting_method()?)?;
    let c = iteration_matrix(&splitting)?.c;
    let matrix = spectrum(&a, None)?;
    let iteration = spectrum(&splitting.g_matrix, None)?;
    let convergent = iteration.spectral_radius < 1.0;

    let eig = general_eigen(&c)?;
    let gap = steady_gap(&eig.values, Some(Complex64::ONE));
    let x0 = y0.insert_row(d, Complex64::ONE);
    let alpha0_sq = match cfg.alpha0_sq {
        Some(w) => w,
        None => {
            let coefficients = eig.coefficients(&x0)?;
            let total: f64 = coefficients.iter().map(|z| z.norm_sqr()).sum();
            let steady = eig
                .values
                .iter()
                .enumerate()
                .min_by(|p, q| (p.1 - Complex64::ONE).norm().total_cmp(&(q.1 - Complex64::ONE).norm()))
                .map(|(i, _)| i)
                .unwrap_or(0);
            coefficients[steady].norm_sqr() / total
        }
    };
    let t_f = if convergent { Some(estimate_tf(alpha0_sq, None, gap, cfg.delta, 0.0)?) } else { None };
    let t_grid = t_f.unwrap_or(0.0);
    let grid = cfg.grid_spec().resolve(&c, t_grid, DriftShift::default())?;
    let cost = quantum_cost_estimate(&c, &grid, t_grid, 1.0 / grid.n() as f64, alpha0_sq.sqrt())?;
    let diagnosis = Diagnosis { matrix, iteration, convergent, augmented_gap: gap, alpha0_sq, delta: cfg.delta, t_f };
    let details = serde_json::to_value(&diagnosis).expect("diagnosis serialisation");
    let mut report = RunReport::new(cfg, &a, details);
    report.grid = Some(grid.summary());
    report.stopping_time = t_f;
    report.cost = Some(cost);
    Ok(report)
}
