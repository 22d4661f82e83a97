use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, SchroError};

pub const MIN_POINTS: usize = 4;
pub const MAX_POINTS: usize = 1 << 16;

/// Periodic discretisation of the auxiliary variable p on [−L, L) together
/// with its Fourier modes η_l = π·l/L, l = −N/2+1, …, N/2.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n: usize,
    half_width: f64,
    p: Vec<f64>,
    eta: Vec<f64>,
}

/// Serializable description of a grid for reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSummary {
    pub n: usize,
    pub half_width: f64,
    pub dp: f64,
    pub d_eta: f64,
}

impl Grid {
    pub fn new(n: usize, half_width: f64) -> Result<Grid> {
        if !(MIN_POINTS..=MAX_POINTS).contains(&n) || !n.is_power_of_two() {
            return Err(SchroError::InvalidGrid(format!(
                "N must be a power of two in [{MIN_POINTS}, {MAX_POINTS}], got {n}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(SchroError::InvalidGrid(format!("L must be positive, got {half_width}")));
        }
        let dp = 2.0 * half_width / n as f64;
        let p = (0..n).map(|l| -half_width + l as f64 * dp).collect();
        let eta = Self::mode_indices(n).map(|m| PI * m as f64 / half_width).collect();
        Ok(Grid { n, half_width, p, eta })
    }

    /// Grid extent covering the domain of dependence of the recovery point
    /// p* = 1 up to time `t`, for a transport whose characteristic speeds lie
    /// in [−`max_speed`, 0]: L = max(π, 4 + t·max_speed).
    pub fn for_transport(n: usize, t: f64, max_speed: f64) -> Result<Grid> {
        Grid::new(n, auto_half_width(t, max_speed))
    }

    /// Signed mode numbers −N/2+1, …, N/2 in column order.
    pub fn mode_indices(n: usize) -> impl Iterator<Item = i64> {
        let half = (n / 2) as i64;
        (-half + 1)..=half
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dp(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn d_eta(&self) -> f64 {
        PI / self.half_width
    }

    pub fn p_points(&self) -> &[f64] {
        &self.p
    }

    pub fn eta_points(&self) -> &[f64] {
        &self.eta
    }

    /// Index of the grid point closest to `p`.
    pub fn nearest_p_index(&self, p: f64) -> usize {
        let idx = ((p + self.half_width) / self.dp()).round();
        idx.clamp(0.0, (self.n - 1) as f64) as usize
    }

    pub fn summary(&self) -> GridSummary {
        GridSummary { n: self.n, half_width: self.half_width, dp: self.dp(), d_eta: self.d_eta() }
    }
}

pub fn auto_half_width(t: f64, max_speed: f64) -> f64 {
    (4.0 + t.max(0.0) * max_speed.abs()).max(PI)
}
