use log::warn;
use num_complex::Complex64;
use serde::Serialize;

use super::cost::{quantum_cost_estimate, CostReport};
use super::linear::overlaps;
use super::stopping::{estimate_tmax, ConvergenceEstimate, MIN_GAP};
use super::GridSpec;
use crate::error::{Result, SchroError};
use crate::linalg::{
    ensure_finite_vector, ensure_square, expectation, fidelity, normalized, split, ComplexMatrix, ComplexVector,
};
use crate::schrodingerization::{propagate_with, DriftShift, GridSummary, PropagateOptions, RecoveryMode};

/// Eigenvalues whose imaginary part exceeds this fall outside the class the
/// stopping-time bound is derived for.
const REAL_SPECTRUM_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct PowerOptions {
    pub epsilon: f64,
    pub grid: GridSpec,
    pub time: Option<f64>,
    pub recovery: RecoveryMode,
    /// The default removes the overall decay e^{λ_max(C₁)t}, the continuous
    /// analogue of normalising each power iterate.
    pub drift_shift: DriftShift,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions {
            epsilon: 0.1,
            grid: GridSpec::default(),
            time: None,
            recovery: RecoveryMode::default(),
            drift_shift: DriftShift::Full,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerReport {
    #[serde(serialize_with = "crate::linalg::serde_complex::scalar")]
    pub eigenvalue_estimate: Complex64,
    #[serde(serialize_with = "crate::linalg::serde_complex::vector")]
    pub state: ComplexVector,
    /// √Tr(C†C)·√(2 − F) with F the fidelity against the top eigenvector.
    pub eigenvalue_error_bound: f64,
    pub fidelity: f64,
    /// Top eigenvalue from the dense eigensolve.
    #[serde(serialize_with = "crate::linalg::serde_complex::scalar")]
    pub eigenvalue_oracle: Complex64,
    pub t_max_used: f64,
    pub success_probability: f64,
    pub grid: GridSummary,
    pub convergence: ConvergenceEstimate,
    pub cost: CostReport,
}

/// ⟨s|C₁|s⟩ + i⟨s|C₂|s⟩ with C₁ = (C + C†)/2 and C₂ = (C − C†)/(2i), each a
/// Hermitian expectation taken separately.
pub fn eigenvalue_from_state(state: &ComplexVector, c: &ComplexMatrix) -> Result<Complex64> {
    let d = ensure_square(c)?;
    if state.len() != d {
        return Err(SchroError::DimensionMismatch(format!("C is {d}x{d} but state has length {}", state.len())));
    }
    let s = split(c)?;
    Ok(Complex64::new(expectation(state, &s.obs_c1).re, expectation(state, &s.obs_c2).re))
}

/// Power iteration lifted to dx/dt = (C − I)x: evolves for t_max and reads
/// the top eigenvalue off the recovered state.
pub fn quantum_power_method(c: &ComplexMatrix, x0: &ComplexVector, options: &PowerOptions) -> Result<PowerReport> {
    let d = ensure_square(c)?;
    if x0.len() != d {
        return Err(SchroError::DimensionMismatch(format!("C is {d}x{d} but x0 has length {}", x0.len())));
    }
    ensure_finite_vector(x0, "x0")?;
    let x0 = normalized(x0)?;
    let ov = overlaps(c, &x0)?;
    if ov.values.iter().any(|z| z.im.abs() > REAL_SPECTRUM_TOL || z.re <= 0.0 || z.re >= 1.0) {
        warn!("spectrum of C is not real, positive and below one; the t_max bound is best effort");
    }
    let top = 0;
    let gap = if d > 1 { ov.values[0].re - ov.values[1].re } else { f64::INFINITY };
    if gap < MIN_GAP {
        return Err(SchroError::NoGap(format!("top eigenvalues of C are separated by {gap:e}")));
    }
    if ov.coefficients[top].norm() <= 1e-14 {
        return Err(SchroError::UnreachableEigenvector);
    }
    let gamma1_sq = ov.weights[top];
    let trace = c.norm_squared();
    let t_estimate = if d == 1 { 0.0 } else { estimate_tmax(gamma1_sq, gap, options.epsilon, trace)? };
    let t = match options.time {
        Some(t) if !(t >= 0.0 && t.is_finite()) => {
            return Err(SchroError::InvalidArgument(format!("time must be finite and >= 0, got {t}")))
        }
        Some(t) => t,
        None => t_estimate,
    };
    let grid = options.grid.resolve(c, t, options.drift_shift)?;
    let run = propagate_with(
        c,
        &x0,
        t,
        &grid,
        &PropagateOptions {
            recovery: options.recovery,
            drift_shift: options.drift_shift,
            ..PropagateOptions::default()
        },
    )?;
    let state = run.recovered.state;
    let estimate = eigenvalue_from_state(&state, c)?;
    let top_vector = ov.vectors.column(top).into_owned();
    let fid = fidelity(&state, &top_vector);
    let cost = quantum_cost_estimate(c, &grid, t, options.epsilon, gamma1_sq.sqrt())?.with_measurement();
    Ok(PowerReport {
        eigenvalue_estimate: estimate,
        state,
        eigenvalue_error_bound: trace.sqrt() * (2.0 - fid).sqrt(),
        fidelity: fid,
        eigenvalue_oracle: ov.values[top],
        t_max_used: t,
        success_probability: run.recovered.success_probability,
        grid: grid.summary(),
        convergence: ConvergenceEstimate {
            overlaps: ov.target_first(top),
            gap,
            delta: super::stopping::delta_from_epsilon(options.epsilon, trace),
            l_term: 0.0,
            t_out: t_estimate,
        },
        cost,
    })
}
