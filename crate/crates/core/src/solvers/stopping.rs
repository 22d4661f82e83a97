//! Stopping-time estimates from eigen-expansion overlaps.

use serde::Serialize;

use crate::error::{Result, SchroError};

/// Gaps below this count as degenerate.
pub const MIN_GAP: f64 = 1e-10;

/// Inputs and output of a stopping-time estimate.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceEstimate {
    /// Normalised squared overlaps with the eigenvectors, target first.
    pub overlaps: Vec<f64>,
    pub gap: f64,
    pub delta: f64,
    pub l_term: f64,
    pub t_out: f64,
}

fn check_gap(gap: f64) -> Result<()> {
    if !(gap >= MIN_GAP) || !gap.is_finite() {
        return Err(SchroError::NoGap(format!("spectral gap {gap:e} is below {MIN_GAP:e}")));
    }
    Ok(())
}

/// Time after which the fidelity with the steady state reaches 1 − δ.
///
/// With `alpha1_sq = None` and `l_term = 0` the two dominant states are
/// assumed to carry all the weight (|α₁|² ≈ 1 − |α₀|²) and
/// t_f = ln((1/δ)(1/|α₀|² − 1)) / (2Δ). Otherwise the general form
/// t_f = ln(|α₁|²(1−δ)/(|α₀|²δ) · 1/(1 − L(1−δ)/(|α₀|²δ))) / (2Δ) is used.
/// A log argument at or below one means the state is already converged and
/// gives t_f = 0.
pub fn estimate_tf(alpha0_sq: f64, alpha1_sq: Option<f64>, gap: f64, delta: f64, l_term: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(SchroError::InvalidArgument(format!("delta must lie in (0, 1), got {delta}")));
    }
    check_gap(gap)?;
    if !(alpha0_sq > 0.0) {
        return Err(SchroError::UnreachableSteadyState);
    }
    if alpha0_sq > 1.0 + 1e-12 || !(l_term >= 0.0) {
        return Err(SchroError::InvalidArgument(format!(
            "overlap |a0|^2 = {alpha0_sq} and L = {l_term} must be normalised weights"
        )));
    }
    let argument = match (alpha1_sq, l_term) {
        (None, l) if l == 0.0 => (1.0 / alpha0_sq - 1.0) / delta,
        (alpha1, l) => {
            let alpha1_sq = alpha1.unwrap_or((1.0 - alpha0_sq - l).max(0.0));
            let leak = l * (1.0 - delta) / (alpha0_sq * delta);
            if leak >= 1.0 {
                return Err(SchroError::InvalidArgument(format!(
                    "residual overlap mass L = {l:e} exceeds the bound's validity (needs L < {:e})",
                    alpha0_sq * delta / (1.0 - delta)
                )));
            }
            alpha1_sq * (1.0 - delta) / (alpha0_sq * delta) / (1.0 - leak)
        }
    };
    Ok(clamped_log(argument) / (2.0 * gap))
}

/// Time after which ⟨x|C|x⟩ approximates the top eigenvalue to ε:
/// t_max = ln((2 Tr(C†C)/ε²)(1/|γ₁|² − 1)) / (2Δ̃).
pub fn estimate_tmax(gamma1_sq: f64, gap: f64, epsilon: f64, trace_cdag_c: f64) -> Result<f64> {
    check_gap(gap)?;
    if !(gamma1_sq > 0.0 && gamma1_sq <= 1.0 + 1e-12) {
        return Err(SchroError::InvalidArgument(format!("|gamma1|^2 must lie in (0, 1], got {gamma1_sq}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(trace_cdag_c > 0.0 && trace_cdag_c.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("Tr(C^dag C) must be positive, got {trace_cdag_c}")));
    }
    let argument = 2.0 * trace_cdag_c / (epsilon * epsilon) * (1.0 / gamma1_sq - 1.0);
    Ok(clamped_log(argument) / (2.0 * gap))
}

/// Fidelity target δ = ε²/(2 Tr(C†C)) that makes the trace bound reach ε.
pub fn delta_from_epsilon(epsilon: f64, trace_cdag_c: f64) -> f64 {
    epsilon * epsilon / (2.0 * trace_cdag_c)
}

fn clamped_log(argument: f64) -> f64 {
    if argument <= 1.0 {
        0.0
    } else {
        argument.ln()
    }
}
