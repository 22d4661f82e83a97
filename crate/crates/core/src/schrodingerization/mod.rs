//! Simulation of dx/dt = (C − I)x through the warped phase transformation.
//!
//! The pipeline is: sample w(0, p) = e^{−|p|}x₀ on a periodic p grid,
//! Fourier transform to η modes, evolve each mode with its own Hermitian
//! block, transform back, and read x(t) off the p > 0 half.

mod evolution;
mod grid;
mod recovery;
mod transform;

pub use evolution::{
    assemble_htot, evolve, expectation_without_recovery, generator_blocks, GeneratorBlocks, ObservableEstimate,
    MAX_HTOT_DIM,
};
pub use grid::{auto_half_width, Grid, GridSummary, MAX_POINTS, MIN_POINTS};
pub use recovery::{project_positive, recover, RecoveredState, RecoveryMode};
pub use transform::{forward_transform, initial_warped_state, inverse_transform, SpectralState, WarpedState};

use log::{info, warn};
use num_complex::Complex64;

use crate::error::{Result, SchroError};
use crate::linalg::{ensure_finite_matrix, ensure_square, split, ComplexMatrix, ComplexVector, DriftSplit};

/// Eigenvalues of the Hermitian drift part below this are treated as zero.
const DRIFT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagateOptions {
    pub recovery: RecoveryMode,
    pub drift_shift: DriftShift,
    /// When C and x₀ are real the exact x(t) is real, so the imaginary part
    /// of the recovered vector is discretisation error and is dropped.
    pub real_projection: bool,
}

impl Default for PropagateOptions {
    fn default() -> Self {
        PropagateOptions { recovery: RecoveryMode::default(), drift_shift: DriftShift::Positive, real_projection: true }
    }
}

/// Scalar μ subtracted from the drift before evolving; the factor e^{μt} is
/// restored after recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DriftShift {
    /// Evolve C₁ as given.
    Off,
    /// μ = max(0, λ_max(C₁)), so every characteristic moves toward p < 0.
    #[default]
    Positive,
    /// μ = λ_max(C₁) of either sign. The slowest characteristic then stands
    /// still and the amplitude on p > 0 no longer decays with t.
    Full,
}

/// Result of the end-to-end pipeline.
#[derive(Debug, Clone)]
pub struct Propagation {
    pub recovered: RecoveredState,
    /// Scalar μ removed from the drift.
    pub drift_shift: f64,
    /// Largest eigenvalue of the Hermitian part of C − I.
    pub drift_max_eigenvalue: f64,
}

/// Drift shift μ and the fastest transport speed after shifting.
#[derive(Debug, Clone, Copy)]
pub struct DriftProfile {
    pub max_eigenvalue: f64,
    pub min_eigenvalue: f64,
}

impl DriftProfile {
    pub fn of(split: &DriftSplit) -> Result<DriftProfile> {
        let values = split.drift_eigenvalues()?;
        Ok(DriftProfile {
            max_eigenvalue: values.last().copied().unwrap_or(0.0),
            min_eigenvalue: values.first().copied().unwrap_or(0.0),
        })
    }

    pub fn shift(&self, mode: DriftShift) -> f64 {
        match mode {
            DriftShift::Off => 0.0,
            DriftShift::Positive if self.max_eigenvalue > DRIFT_TOL => self.max_eigenvalue,
            DriftShift::Positive => 0.0,
            DriftShift::Full => self.max_eigenvalue,
        }
    }

    /// max |λ(C₁ − μI)|.
    pub fn max_speed(&self, mode: DriftShift) -> f64 {
        let mu = self.shift(mode);
        (mu - self.min_eigenvalue).abs().max((self.max_eigenvalue - mu).abs())
    }
}

/// Grid with N points and extent L = max(π, 4 + t·ρ), with ρ the fastest
/// transport speed of the (shifted) drift.
/// Grid for the default drift shift.
pub fn auto_grid(c: &ComplexMatrix, t: f64, n: usize) -> Result<Grid> {
    auto_grid_with(c, t, n, DriftShift::default())
}

pub fn auto_grid_with(c: &ComplexMatrix, t: f64, n: usize, shift: DriftShift) -> Result<Grid> {
    let profile = DriftProfile::of(&split(c)?)?;
    Grid::for_transport(n, t, profile.max_speed(shift))
}

pub fn propagate(c: &ComplexMatrix, x0: &ComplexVector, t: f64, grid: &Grid) -> Result<RecoveredState> {
    Ok(propagate_with(c, x0, t, grid, &PropagateOptions::default())?.recovered)
}

pub fn propagate_with(
    c: &ComplexMatrix,
    x0: &ComplexVector,
    t: f64,
    grid: &Grid,
    options: &PropagateOptions,
) -> Result<Propagation> {
    let d = ensure_square(c)?;
    ensure_finite_matrix(c, "system matrix")?;
    if x0.len() != d {
        return Err(SchroError::DimensionMismatch(format!("C is {d}x{d} but x0 has length {}", x0.len())));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("time must be finite and >= 0, got {t}")));
    }
    let drift = split(c)?;
    let profile = DriftProfile::of(&drift)?;
    let mu = profile.shift(options.drift_shift);
    if profile.max_eigenvalue > DRIFT_TOL {
        if mu > 0.0 {
            info!("Hermitian part of C - I has max eigenvalue {:.3e}; shifting drift", profile.max_eigenvalue);
        } else {
            warn!(
                "Hermitian part of C - I is not negative semidefinite (max eigenvalue {:.3e}); recovery near p = 0 may be contaminated",
                profile.max_eigenvalue
            );
        }
    }
    let generator = generator_blocks(&drift.shifted(mu), grid)?;
    let w0 = initial_warped_state(x0, grid)?;
    let spectral = evolve(&forward_transform(&w0, grid)?, &generator, t)?;
    let wt = inverse_transform(&spectral, grid)?;
    let mut recovered = recover(&wt, grid, options.recovery)?;
    if mu != 0.0 {
        recovered.x *= Complex64::new((mu * t).exp(), 0.0);
    }
    if options.real_projection && is_real(c.iter()) && is_real(x0.iter()) {
        recovered.x.iter_mut().for_each(|z| z.im = 0.0);
        let norm = recovered.x.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(SchroError::DegenerateRecovery { norm });
        }
        recovered.state = recovered.x.unscale(norm);
    }
    Ok(Propagation { recovered, drift_shift: mu, drift_max_eigenvalue: profile.max_eigenvalue })
}

fn is_real<'a>(mut values: impl Iterator<Item = &'a Complex64>) -> bool {
    values.all(|z| z.im == 0.0)
}
