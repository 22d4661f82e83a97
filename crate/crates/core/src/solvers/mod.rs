//! Linear solves and dominant eigenvalues through the simulated
//! Schrödinger pipeline, plus the stopping-time and cost estimates.

mod cost;
mod linear;
mod power;
mod splitting;
mod stopping;

pub use cost::{quantum_cost_estimate, CostReport};
pub use linear::{quantum_jacobi_solve, LinearSolveReport, SolveOptions};
pub use power::{eigenvalue_from_state, quantum_power_method, PowerOptions, PowerReport};
pub use splitting::{build_splitting, iteration_matrix, Splitting, SplittingMethod};
pub use stopping::{delta_from_epsilon, estimate_tf, estimate_tmax, ConvergenceEstimate, MIN_GAP};

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::schrodingerization::{auto_grid_with, DriftShift, Grid};

pub const DEFAULT_POINTS: usize = 512;

/// Grid size with an optional fixed extent; the extent otherwise follows
/// the evolution time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub n: usize,
    pub half_width: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { n: DEFAULT_POINTS, half_width: None }
    }
}

impl GridSpec {
    pub fn resolve(&self, c: &ComplexMatrix, t: f64, shift: DriftShift) -> Result<Grid> {
        match self.half_width {
            Some(l) => Grid::new(self.n, l),
            None => auto_grid_with(c, t, self.n, shift),
        }
    }
}
