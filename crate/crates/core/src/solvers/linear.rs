use log::warn;
use num_complex::Complex64;
use serde::Serialize;

use super::cost::{quantum_cost_estimate, CostReport};
use super::splitting::{build_splitting, iteration_matrix, SplittingMethod};
use super::stopping::{estimate_tf, ConvergenceEstimate};
use super::GridSpec;
use crate::baselines::direct_solve;
use crate::error::{Result, SchroError};
use crate::linalg::{
    deaugment, fidelity, general_eigen, is_diagonally_dominant, normalized, spectrum, steady_gap, ComplexMatrix,
    ComplexVector,
};
use crate::schrodingerization::{propagate_with, DriftShift, GridSummary, PropagateOptions, RecoveryMode};

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub method: SplittingMethod,
    pub delta: f64,
    pub grid: GridSpec,
    /// Evolution time; `None` uses the stopping-time estimate.
    pub time: Option<f64>,
    pub recovery: RecoveryMode,
    /// Skip the diagonal-dominance guard. r(G) < 1 is still enforced.
    pub allow_non_dominant: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            method: SplittingMethod::Jacobi,
            delta: 1e-3,
            grid: GridSpec::default(),
            time: None,
            recovery: RecoveryMode::default(),
            allow_non_dominant: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LinearSolveReport {
    /// Unit augmented state x(t)/‖x(t)‖ with x = (y, 1).
    #[serde(serialize_with = "crate::linalg::serde_complex::vector")]
    pub state: ComplexVector,
    /// Unit |y⟩ read from the first d components of `state`.
    #[serde(serialize_with = "crate::linalg::serde_complex::vector")]
    pub y_state: ComplexVector,
    #[serde(serialize_with = "crate::linalg::serde_complex::vector")]
    pub y_classical: ComplexVector,
    pub residual: f64,
    /// |⟨y|y*⟩|² against the normalised direct solution.
    pub fidelity: f64,
    /// Fidelity of `state` with the normalised steady state (y*, 1).
    pub augmented_fidelity: f64,
    pub t_f_used: f64,
    /// Augmented-level tolerance that makes the y-level infidelity at most δ.
    pub delta_augmented: f64,
    pub spectral_radius: f64,
    pub success_probability: f64,
    pub drift_shift: f64,
    pub grid: GridSummary,
    pub convergence: ConvergenceEstimate,
    pub cost: CostReport,
}

/// Squared expansion coefficients of a state in the eigenvector basis,
/// normalised to sum to one.
pub(crate) struct Overlaps {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
    pub weights: Vec<f64>,
    pub coefficients: ComplexVector,
}

impl Overlaps {
    pub fn target_first(&self, target: usize) -> Vec<f64> {
        let mut w = vec![self.weights[target]];
        w.extend(self.weights.iter().enumerate().filter(|(i, _)| *i != target).map(|(_, w)| *w));
        w
    }
}

pub(crate) fn overlaps(c: &ComplexMatrix, x: &ComplexVector) -> Result<Overlaps> {
    let eig = general_eigen(c)?;
    let coefficients = eig.coefficients(x)?;
    let raw: Vec<f64> = coefficients.iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = raw.iter().sum();
    if !(total > 0.0) {
        return Err(SchroError::DegenerateState("initial state has no eigen-expansion weight".into()));
    }
    Ok(Overlaps {
        weights: raw.iter().map(|w| w / total).collect(),
        values: eig.values,
        vectors: eig.vectors,
        coefficients,
    })
}

pub(crate) fn nearest_index(values: &[Complex64], target: Complex64) -> usize {
    values
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).norm().total_cmp(&(b.1 - target).norm()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// Prepares |y⟩ ∝ A⁻¹b as the steady state of dx/dt = (C − I)x simulated
/// through the warped phase pipeline.
pub fn quantum_jacobi_solve(
    a: &ComplexMatrix,
    b: &ComplexVector,
    y0: &ComplexVector,
    options: &SolveOptions,
) -> Result<LinearSolveReport> {
    let d = a.nrows();
    if y0.len() != d {
        return Err(SchroError::DimensionMismatch(format!("A is {d}x{d} but y0 has length {}", y0.len())));
    }
    if !(options.delta > 0.0 && options.delta < 1.0) {
        return Err(SchroError::InvalidArgument(format!("delta must lie in (0, 1), got {}", options.delta)));
    }
    let splitting = build_splitting(a, b, options.method)?;
    if options.method == SplittingMethod::Jacobi && !is_diagonally_dominant(a) {
        if !options.allow_non_dominant {
            return Err(SchroError::ConvergenceUnsafe("A is not diagonally dominant".into()));
        }
        warn!("A is not diagonally dominant; relying on the r(G) < 1 check");
    }
    let spectral_radius = spectrum(&splitting.g_matrix, None)?.spectral_radius;
    if !(spectral_radius < 1.0) {
        return Err(SchroError::ConvergenceUnsafe(format!("iteration matrix has r(G) = {spectral_radius:.6} >= 1")));
    }
    let c = iteration_matrix(&splitting)?.c;

    let x0 = y0.clone().insert_row(d, Complex64::ONE);
    let ov = overlaps(&c, &x0)?;
    let steady = nearest_index(&ov.values, Complex64::ONE);
    let gap = steady_gap(&ov.values, Some(Complex64::ONE));
    let alpha0_sq = ov.weights[steady];
    if ov.coefficients[steady].norm() == 0.0 {
        return Err(SchroError::UnreachableSteadyState);
    }
    // x = (√(1−q)|y⟩, √q) with q the weight of the auxiliary component, so
    // an augmented infidelity of δ(1 − q) bounds the |y⟩ infidelity by δ.
    let last = ov.vectors[(d, steady)].norm_sqr();
    let delta_augmented = options.delta * (1.0 - last);
    let t_estimate = if delta_augmented > 0.0 {
        estimate_tf(alpha0_sq, None, gap, delta_augmented, 0.0)?
    } else {
        // y* = 0: the steady state is the auxiliary basis vector alone.
        estimate_tf(alpha0_sq, None, gap, options.delta, 0.0)?
    };
    let t = match options.time {
        Some(t) if !(t >= 0.0 && t.is_finite()) => {
            return Err(SchroError::InvalidArgument(format!("time must be finite and >= 0, got {t}")))
        }
        Some(t) => t,
        None => t_estimate,
    };
    let grid = options.grid.resolve(&c, t, DriftShift::default())?;
    let run = propagate_with(
        &c,
        &x0,
        t,
        &grid,
        &PropagateOptions { recovery: options.recovery, ..PropagateOptions::default() },
    )?;
    let recovered = run.recovered;
    let y_classical = deaugment(&recovered.x)?;
    let y_state = normalized(&recovered.x.rows(0, d).into_owned())?;

    let y_star = direct_solve(a, b)?;
    let b_norm = b.norm();
    let residual = if b_norm == 0.0 { (a * &y_classical).norm() } else { (a * &y_classical - b).norm() / b_norm };
    let fid = fidelity(&y_classical, &y_star);
    let steady_state = y_star.clone().insert_row(d, Complex64::ONE);
    let augmented_fidelity = fidelity(&recovered.state, &steady_state);
    let cost = quantum_cost_estimate(&c, &grid, t, 1.0 / grid.n() as f64, alpha0_sq.sqrt())?;

    Ok(LinearSolveReport {
        state: recovered.state,
        y_state,
        y_classical,
        residual,
        fidelity: fid,
        augmented_fidelity,
        t_f_used: t,
        delta_augmented,
        spectral_radius,
        success_probability: recovered.success_probability,
        drift_shift: run.drift_shift,
        grid: grid.summary(),
        convergence: ConvergenceEstimate {
            overlaps: ov.target_first(steady),
            gap,
            delta: options.delta,
            l_term: 0.0,
            t_out: t_estimate,
        },
        cost,
    })
}
