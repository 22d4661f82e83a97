//! Classical reference computations: direct solves, the exact propagator
//! e^{(C−I)t}, plain stationary and power iterations.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SchroError};
use crate::linalg::{ensure_square, ComplexMatrix, ComplexVector};

/// Relative pivot size below which a factorised matrix counts as singular.
const SINGULAR_PIVOT: f64 = 1e-14;
/// Fewer steps than this cannot support an asymptotic rate estimate.
pub const MIN_CONTRACTION_STEPS: usize = 8;
pub const CONTRACTION_MARGIN: f64 = 0.05;

#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub iterates: Vec<ComplexVector>,
    pub step_deltas: Vec<f64>,
    pub converged_at: Option<usize>,
}

/// Runs x_{k+1} = C x_k for `steps` steps, recording every iterate.
pub fn classical_iterate(c: &ComplexMatrix, x0: &ComplexVector, steps: usize, tol: f64) -> Result<IterationTrace> {
    let d = ensure_square(c)?;
    if x0.len() != d {
        return Err(SchroError::DimensionMismatch(format!("C is {d}x{d} but x0 has length {}", x0.len())));
    }
    if steps == 0 {
        return Err(SchroError::InvalidArgument("need at least one iteration".into()));
    }
    let mut iterates = Vec::with_capacity(steps + 1);
    let mut step_deltas = Vec::with_capacity(steps);
    let mut converged_at = None;
    iterates.push(x0.clone());
    for k in 1..=steps {
        let next = c * &iterates[k - 1];
        let delta = (&next - &iterates[k - 1]).norm();
        if converged_at.is_none() && delta < tol {
            converged_at = Some(k);
        }
        step_deltas.push(delta);
        iterates.push(next);
    }
    Ok(IterationTrace { iterates, step_deltas, converged_at })
}

/// Power iteration with per-step normalisation. Returns the Rayleigh
/// estimate x_K†x_{K+1} / x_K†x_K and the unit vector x_K/‖x_K‖.
///
/// Normalising each iterate avoids underflow when every eigenvalue is below
/// one; the Rayleigh quotient is scale invariant so the estimate is the
/// same as for the raw iterates.
pub fn classical_power(c: &ComplexMatrix, x0: &ComplexVector, steps: usize) -> Result<(Complex64, ComplexVector)> {
    let d = ensure_square(c)?;
    if x0.len() != d {
        return Err(SchroError::DimensionMismatch(format!("C is {d}x{d} but x0 has length {}", x0.len())));
    }
    if steps == 0 {
        return Err(SchroError::InvalidArgument("need at least one iteration".into()));
    }
    let mut x = crate::linalg::normalized(x0)?;
    for _ in 0..steps {
        x = crate::linalg::normalized(&(c * &x))
            .map_err(|_| SchroError::DegenerateState("power iterate collapsed to zero".into()))?;
    }
    let next = c * &x;
    let estimate = x.dotc(&next) / x.dotc(&x);
    Ok((estimate, x))
}

pub fn direct_solve(a: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    let d = ensure_square(a)?;
    if b.len() != d {
        return Err(SchroError::DimensionMismatch(format!("A is {d}x{d} but b has length {}", b.len())));
    }
    let lu = a.clone().full_piv_lu();
    let u = lu.u();
    let pivots: Vec<f64> = (0..d).map(|i| u[(i, i)].norm()).collect();
    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let smallest = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if d == 0 || largest == 0.0 || smallest <= SINGULAR_PIVOT * largest {
        return Err(SchroError::Singular);
    }
    lu.solve(b).ok_or(SchroError::Singular)
}

/// e^{(C−I)t} x₀ by dense scaling-and-squaring.
pub fn exact_propagator(c: &ComplexMatrix, x0: &ComplexVector, t: f64) -> Result<ComplexVector> {
    let d = ensure_square(c)?;
    if x0.len() != d {
        return Err(SchroError::DimensionMismatch(format!("C is {d}x{d} but x0 has length {}", x0.len())));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("time must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(x0.clone());
    }
    let generator = (c - ComplexMatrix::identity(d, d)) * Complex64::new(t, 0.0);
    Ok(generator.exp() * x0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContractionVerdict {
    Contractive,
    NotContractive,
    /// The trace is too short to estimate an asymptotic rate.
    Inconclusive,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ContractionCheck {
    pub verdict: ContractionVerdict,
    pub observed_rate: Option<f64>,
    pub spectral_radius: f64,
}

/// Compares the asymptotic decay rate of the step deltas, max over the last
/// half of the informative trace of (δ_k/δ_0)^{1/k}, against r(G) + 0.05.
/// A rate of one or more is never contractive.
///
/// Deltas at roundoff level count as fully decayed, so a trace that reaches
/// zero (nilpotent G) or machine precision contributes rate 0 there.
pub fn contraction_check(trace: &IterationTrace, c: &ComplexMatrix) -> Result<ContractionCheck> {
    let d = ensure_square(c)?;
    if d == 0 {
        return Err(SchroError::InvalidArgument("empty iteration matrix".into()));
    }
    // r(G) with G the top-left block of the augmented C.
    let g = c.view((0, 0), (d - 1, d - 1)).into_owned();
    let spectral_radius = if d == 1 { 0.0 } else { crate::linalg::spectrum(&g, None)?.spectral_radius };
    if trace.step_deltas.len() < MIN_CONTRACTION_STEPS {
        return Ok(ContractionCheck {
            verdict: ContractionVerdict::Inconclusive,
            observed_rate: None,
            spectral_radius,
        });
    }
    let scale = trace.iterates.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let floor = 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let deltas = &trace.step_deltas;
    let first = deltas[0];
    let rate = if first <= floor {
        0.0
    } else {
        let last = deltas.len() - 1;
        let start = last.div_ceil(2).max(1);
        (start..=last)
            .map(|k| if deltas[k] <= floor { 0.0 } else { (deltas[k] / first).powf(1.0 / k as f64) })
            .fold(0.0, f64::max)
    };
    let verdict = if rate <= spectral_radius + CONTRACTION_MARGIN && rate < 1.0 {
        ContractionVerdict::Contractive
    } else {
        ContractionVerdict::NotContractive
    };
    Ok(ContractionCheck { verdict, observed_rate: Some(rate), spectral_radius })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{deaugment, real_matrix, real_vector};
    use approx::assert_abs_diff_eq;

    fn jacobi_c() -> ComplexMatrix {
        real_matrix(3, 3, &[0.0, -0.5, 0.5, -1.0 / 3.0, 0.0, 2.0 / 3.0, 0.0, 0.0, 1.0])
    }

    #[test]
    fn first_jacobi_step() {
        let tr = classical_iterate(&jacobi_c(), &real_vector(&[0.0, 0.0, 1.0]), 1, 1e-12).unwrap();
        assert!((&tr.iterates[1] - real_vector(&[0.5, 2.0 / 3.0, 1.0])).norm() < 1e-15);
        assert_eq!(tr.step_deltas.len(), tr.iterates.len() - 1);
    }

    #[test]
    fn identity_iteration_converges_immediately() {
        let x0 = real_vector(&[0.3, 0.7]);
        let tr = classical_iterate(&ComplexMatrix::identity(2, 2), &x0, 5, 1e-12).unwrap();
        assert!(tr.iterates.iter().all(|x| *x == x0));
        assert_eq!(tr.converged_at, Some(1));
    }

    #[test]
    fn jacobi_limit_is_direct_solution() {
        let tr = classical_iterate(&jacobi_c(), &real_vector(&[0.0, 0.0, 1.0]), 80, 1e-13).unwrap();
        let y = deaugment(tr.iterates.last().unwrap()).unwrap();
        let oracle = direct_solve(&real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]), &real_vector(&[1.0, 2.0])).unwrap();
        assert!((y - oracle).norm() < 1e-12);
        assert!(tr.converged_at.is_some());
    }

    #[test]
    fn hand_computed_power_step() {
        // x₃ = (0.729, 0.125), x₄ = (0.6561, 0.0625): 0.48611 / 0.547066.
        let c = real_matrix(2, 2, &[0.9, 0.0, 0.0, 0.5]);
        let (est, _) = classical_power(&c, &real_vector(&[1.0, 1.0]), 3).unwrap();
        let oracle = (0.729 * 0.6561 + 0.125 * 0.0625) / (0.729f64.powi(2) + 0.125f64.powi(2));
        assert_abs_diff_eq!(est.re, oracle, epsilon = 1e-14);
        assert_abs_diff_eq!(est.re, 0.88858, epsilon = 1e-5);
    }

    #[test]
    fn power_from_eigenvector_and_long_run() {
        let c = real_matrix(2, 2, &[0.9, 0.0, 0.0, 0.5]);
        let (est, v) = classical_power(&c, &real_vector(&[1.0, 0.0]), 1).unwrap();
        assert_eq!(est.re, 0.9);
        assert_eq!(v, real_vector(&[1.0, 0.0]));
        let (est, _) = classical_power(&c, &real_vector(&[1.0, 1.0]), 100).unwrap();
        assert!((est.re - 0.9).abs() < 1e-6);
    }

    #[test]
    fn direct_solve_cases() {
        let y = direct_solve(&real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]), &real_vector(&[1.0, 2.0])).unwrap();
        assert!((y - real_vector(&[0.2, 0.6])).norm() < 1e-15);
        let b = real_vector(&[3.0, -1.0, 2.0]);
        assert_eq!(direct_solve(&ComplexMatrix::identity(3, 3), &b).unwrap(), b);
        let singular = real_matrix(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        assert_eq!(direct_solve(&singular, &real_vector(&[1.0, 1.0])).unwrap_err().code(), "singular-matrix");
    }

    #[test]
    fn propagator_closed_forms() {
        let x = exact_propagator(&real_matrix(1, 1, &[0.5]), &real_vector(&[1.0]), 1.0).unwrap();
        assert_abs_diff_eq!(x[0].re, (-0.5f64).exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(x[0].re, 0.60653, epsilon = 1e-5);
        let x0 = real_vector(&[0.1, 0.2]);
        assert_eq!(exact_propagator(&jacobi_c().view((0, 0), (2, 2)).into_owned(), &x0, 0.0).unwrap(), x0);
        let x = exact_propagator(&ComplexMatrix::identity(2, 2), &x0, 7.0).unwrap();
        assert!((x - x0).norm() < 1e-15);
    }

    #[test]
    fn contraction_of_jacobi_example() {
        let c = jacobi_c();
        let tr = classical_iterate(&c, &real_vector(&[0.0, 0.0, 1.0]), 50, 1e-14).unwrap();
        let check = contraction_check(&tr, &c).unwrap();
        assert_eq!(check.verdict, ContractionVerdict::Contractive);
        assert_abs_diff_eq!(check.spectral_radius, (1.0f64 / 6.0).sqrt(), epsilon = 1e-12);
        assert!(check.observed_rate.unwrap() <= (1.0f64 / 6.0).sqrt() + CONTRACTION_MARGIN);
    }

    #[test]
    fn contraction_of_nilpotent_and_short_traces() {
        // G strictly upper triangular: r(G) = 0, deltas vanish after d steps.
        let c = real_matrix(3, 3, &[0.0, 0.7, 1.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0]);
        let tr = classical_iterate(&c, &real_vector(&[0.0, 0.0, 1.0]), 12, 1e-14).unwrap();
        let check = contraction_check(&tr, &c).unwrap();
        assert_eq!(check.verdict, ContractionVerdict::Contractive);
        assert!(check.spectral_radius < 1e-12);

        let tr = classical_iterate(&jacobi_c(), &real_vector(&[0.0, 0.0, 1.0]), 4, 1e-14).unwrap();
        assert_eq!(contraction_check(&tr, &jacobi_c()).unwrap().verdict, ContractionVerdict::Inconclusive);
    }

    #[test]
    fn expanding_iteration_is_not_contractive() {
        let c = real_matrix(2, 2, &[1.5, 1.0, 0.0, 1.0]);
        let tr = classical_iterate(&c, &real_vector(&[0.0, 1.0]), 20, 1e-14).unwrap();
        assert_eq!(contraction_check(&tr, &c).unwrap().verdict, ContractionVerdict::NotContractive);
    }
}
