//! Warped initial data and the discrete Fourier pair between the p grid and
//! the η modes.
//!
//! The forward map is ṽ(η_m) = (Δp/2π) Σ_j v(p_j) e^{iη_m p_j}, which is the
//! Riemann sum of (1/2π)∫ v(p) e^{iηp} dp. With this kernel the transform of
//! e^{−|p|} tends to 1/(π(1+η²)) and ∂/∂p becomes multiplication by −iη, so
//! the transport equation ∂v/∂t = −C₁ ∂v/∂p + iC₂v turns into
//! i dṽ/dt = −(ηC₁ + C₂)ṽ. The inverse is the exact discrete inverse,
//! v(p_j) = Δη Σ_m ṽ(η_m) e^{−iη_m p_j}.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::Grid;
use crate::error::{Result, SchroError};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// Samples of the warped variable on the p grid, one row per component and
/// one column per grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpedState {
    pub values: ComplexMatrix,
    pub time: f64,
}

/// Fourier coefficients of the warped variable, one column per η mode in
/// ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    pub values: ComplexMatrix,
    pub time: f64,
}

impl SpectralState {
    pub fn norm(&self) -> f64 {
        self.values.norm()
    }
}

/// w(0, p_l) = e^{−|p_l|} x₀.
pub fn initial_warped_state(x0: &ComplexVector, grid: &Grid) -> Result<WarpedState> {
    crate::linalg::ensure_finite_vector(x0, "initial state")?;
    if x0.norm() == 0.0 {
        return Err(SchroError::DegenerateState("initial state is the zero vector".into()));
    }
    let profile: Vec<f64> = grid.p_points().iter().map(|p| (-p.abs()).exp()).collect();
    let values = ComplexMatrix::from_fn(x0.len(), grid.n(), |i, l| x0[i] * profile[l]);
    Ok(WarpedState { values, time: 0.0 })
}

#[inline]
fn alternating_sign(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_width(values: &ComplexMatrix, grid: &Grid) -> Result<()> {
    if values.ncols() != grid.n() {
        return Err(SchroError::DimensionMismatch(format!(
            "state has {} columns but grid has {} points",
            values.ncols(),
            grid.n()
        )));
    }
    Ok(())
}

/// p grid → η modes.
pub fn forward_transform(w: &WarpedState, grid: &Grid) -> Result<SpectralState> {
    check_width(&w.values, grid)?;
    let n = grid.n();
    let fft = FftPlanner::new().plan_fft_inverse(n);
    let scale = grid.dp() / (2.0 * PI);
    let mut out = ComplexMatrix::zeros(w.values.nrows(), n);
    let mut buf = vec![Complex64::ZERO; n];
    for i in 0..w.values.nrows() {
        for (j, slot) in buf.iter_mut().enumerate() {
            *slot = w.values[(i, j)];
        }
        // Σ_j v_j e^{+2πi jk/N}
        fft.process(&mut buf);
        for (col, m) in Grid::mode_indices(n).enumerate() {
            let k = m.rem_euclid(n as i64) as usize;
            out[(i, col)] = buf[k] * (scale * alternating_sign(m));
        }
    }
    Ok(SpectralState { values: out, time: w.time })
}

/// η modes → p grid.
pub fn inverse_transform(s: &SpectralState, grid: &Grid) -> Result<WarpedState> {
    check_width(&s.values, grid)?;
    let n = grid.n();
    let fft = FftPlanner::new().plan_fft_forward(n);
    let scale = grid.d_eta();
    let mut out = ComplexMatrix::zeros(s.values.nrows(), n);
    let mut buf = vec![Complex64::ZERO; n];
    for i in 0..s.values.nrows() {
        for (col, m) in Grid::mode_indices(n).enumerate() {
            let k = m.rem_euclid(n as i64) as usize;
            buf[k] = s.values[(i, col)] * alternating_sign(m);
        }
        // Σ_k c_k e^{−2πi jk/N}
        fft.process(&mut buf);
        for (j, z) in buf.iter().enumerate() {
            out[(i, j)] = z * scale;
        }
    }
    Ok(WarpedState { values: out, time: s.time })
}
