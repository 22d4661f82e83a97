use serde::Serialize;

use crate::error::{Result, SchroError};
use crate::linalg::{max_norm, sparsity, ComplexMatrix};
use crate::schrodingerization::Grid;

/// Query-complexity scales of the simulated quantum protocol.
#[derive(Debug, Clone, Serialize)]
pub struct CostReport {
    pub sparsity: usize,
    pub max_norm: f64,
    pub t: f64,
    pub epsilon: f64,
    pub overlap: f64,
    /// s·‖C‖_max·t/ε.
    pub predicted_query_scale: f64,
    /// 1/overlap, the amplitude-amplification retrieval factor.
    pub retrieval_factor: f64,
    /// max(‖C‖_max, 1)·‖D‖_max, the max-norm scale of the full Hamiltonian.
    pub hamiltonian_max_norm: f64,
    /// predicted_query_scale·retrieval_factor/ε, including the sampling
    /// cost of estimating an expectation value to precision ε.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub with_measurement: Option<f64>,
}

pub fn quantum_cost_estimate(c: &ComplexMatrix, grid: &Grid, t: f64, epsilon: f64, overlap: f64) -> Result<CostReport> {
    if !(overlap > 0.0 && overlap.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("overlap must be positive, got {overlap}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("time must be nonnegative, got {t}")));
    }
    let s = sparsity(c);
    let norm = max_norm(c);
    let d_max = grid.eta_points().iter().fold(0.0f64, |m, e| m.max(e.abs()));
    Ok(CostReport {
        sparsity: s,
        max_norm: norm,
        t,
        epsilon,
        overlap,
        predicted_query_scale: s as f64 * norm * t / epsilon,
        retrieval_factor: 1.0 / overlap,
        hamiltonian_max_norm: norm.max(1.0) * d_max,
        with_measurement: None,
    })
}

impl CostReport {
    /// Adds the O(1/ε) measurement factor used for eigenvalue estimation.
    pub fn with_measurement(mut self) -> CostReport {
        self.with_measurement = Some(self.predicted_query_scale * self.retrieval_factor / self.epsilon);
        self
    }
}
