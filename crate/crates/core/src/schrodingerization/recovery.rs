use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::transform::WarpedState;
use crate::error::{Result, SchroError};
use crate::linalg::{ComplexMatrix, ComplexVector};

/// How x(t) is read off the warped variable on p > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum RecoveryMode {
    /// x̂ = e^{p*} w(t, p*) at the grid point nearest `pstar`.
    AtPstar { pstar: f64 },
    /// Least-squares fit of w(t, p_l) ≈ e^{−p_l} x̂ over every p_l > 0.
    SumPositive,
}

impl Default for RecoveryMode {
    fn default() -> Self {
        RecoveryMode::AtPstar { pstar: 1.0 }
    }
}

#[derive(Debug, Clone)]
pub struct RecoveredState {
    /// Unnormalised recovered x(t).
    pub x: ComplexVector,
    /// x / ‖x‖.
    pub state: ComplexVector,
    /// Probability that projecting the simulated register onto p > 0 succeeds.
    pub success_probability: f64,
    pub time: f64,
    /// Grid point actually used by `AtPstar`.
    pub pstar_used: Option<f64>,
}

pub fn recover(w: &WarpedState, grid: &Grid, mode: RecoveryMode) -> Result<RecoveredState> {
    if w.values.ncols() != grid.n() {
        return Err(SchroError::DimensionMismatch(format!(
            "state has {} columns but grid has {} points",
            w.values.ncols(),
            grid.n()
        )));
    }
    let positive: Vec<usize> = (0..grid.n()).filter(|&l| grid.p_points()[l] > 0.0).collect();
    let (x, pstar_used) = match mode {
        RecoveryMode::AtPstar { pstar } => {
            if !(pstar > 0.0 && pstar < grid.half_width()) {
                return Err(SchroError::InvalidArgument(format!(
                    "p* = {pstar} must lie in (0, L = {})",
                    grid.half_width()
                )));
            }
            let l = grid.nearest_p_index(pstar);
            let p = grid.p_points()[l];
            if p <= 0.0 {
                return Err(SchroError::InvalidArgument(format!("p* = {pstar} rounds to non-positive grid point {p}")));
            }
            (w.values.column(l).scale(p.exp()), Some(p))
        }
        RecoveryMode::SumPositive => {
            let mut num = ComplexVector::zeros(w.values.nrows());
            let mut den = 0.0;
            for &l in &positive {
                let weight = (-grid.p_points()[l]).exp();
                num += w.values.column(l).scale(weight);
                den += weight * weight;
            }
            (num.unscale(den), None)
        }
    };
    let norm = x.norm();
    if !(norm.is_finite() && norm > f64::MIN_POSITIVE * 1e10) {
        return Err(SchroError::DegenerateRecovery { norm });
    }
    let profile_norm = positive.iter().map(|&l| (-2.0 * grid.p_points()[l]).exp()).sum::<f64>().sqrt();
    let total = w.values.norm();
    let success_probability = ((norm * profile_norm / total).powi(2)).min(1.0);
    Ok(RecoveredState { state: x.unscale(norm), x, success_probability, time: w.time, pstar_used })
}

/// Projection onto p > 0, P̂ = I ⊗ Σ_{p_l > 0} |l⟩⟨l|, applied to w.
pub fn project_positive(w: &WarpedState, grid: &Grid) -> ComplexMatrix {
    let mut out = w.values.clone();
    for (l, &p) in grid.p_points().iter().enumerate() {
        if p <= 0.0 {
            out.column_mut(l).fill(num_complex::Complex64::ZERO);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_vector;
    use crate::schrodingerization::transform::initial_warped_state;

    #[test]
    fn recovers_initial_data() {
        let g = Grid::new(64, 6.0).unwrap();
        let x0 = real_vector(&[0.3, -0.4, 1.2]);
        let w = initial_warped_state(&x0, &g).unwrap();
        for mode in [RecoveryMode::default(), RecoveryMode::SumPositive] {
            let r = recover(&w, &g, mode).unwrap();
            assert!((r.x.clone() - &x0).norm() < 1e-12);
            assert!((r.state.norm() - 1.0).abs() < 1e-14);
            assert!(r.success_probability > 0.0 && r.success_probability <= 1.0);
        }
    }

    #[test]
    fn projection_keeps_positive_half() {
        let g = Grid::new(8, 4.0).unwrap();
        let w = initial_warped_state(&real_vector(&[1.0]), &g).unwrap();
        let projected = project_positive(&w, &g);
        for (l, &p) in g.p_points().iter().enumerate() {
            assert_eq!(projected[(0, l)].norm() == 0.0, p <= 0.0);
        }
        // ‖P̂w‖² / ‖w‖² is the success probability at t = 0 with x̂ = x₀.
        let r = recover(&w, &g, RecoveryMode::default()).unwrap();
        let ratio = projected.norm_squared() / w.values.norm_squared();
        assert!((r.success_probability - ratio).abs() < 1e-12);
    }

    #[test]
    fn vanishing_state_is_degenerate() {
        let g = Grid::new(8, 4.0).unwrap();
        let w = WarpedState { values: ComplexMatrix::zeros(2, 8), time: 1.0 };
        assert_eq!(recover(&w, &g, RecoveryMode::SumPositive).unwrap_err().code(), "degenerate-recovery");
    }

    #[test]
    fn pstar_outside_domain_rejected() {
        let g = Grid::new(8, 4.0).unwrap();
        let w = initial_warped_state(&real_vector(&[1.0]), &g).unwrap();
        assert!(recover(&w, &g, RecoveryMode::AtPstar { pstar: 5.0 }).is_err());
        assert!(recover(&w, &g, RecoveryMode::AtPstar { pstar: -1.0 }).is_err());
    }
}
