//! Per-mode Hamiltonians and their unitary evolution.
//!
//! The full Hamiltonian −C⊗(D−iI)/2 − C†⊗(D+iI)/2 + I⊗D is block diagonal in
//! η, with block −(η_l·C₁ + C₂) for mode l. Evolution therefore runs one small
//! Hermitian eigendecomposition per mode, independently and in parallel.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::grid::Grid;
use super::transform::SpectralState;
use crate::error::{Result, SchroError};
use crate::linalg::{
    c64, ensure_hermitian, ensure_square, hermitian_eigen, hermitian_propagator, ComplexMatrix, ComplexVector,
    DriftSplit,
};

/// Dense assembly limit for the full Hamiltonian, in rows.
pub const MAX_HTOT_DIM: usize = 4096;

#[derive(Debug, Clone)]
pub struct GeneratorBlocks {
    pub blocks: Vec<ComplexMatrix>,
    pub eta: Vec<f64>,
}

impl GeneratorBlocks {
    pub fn dim(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.nrows())
    }
}

pub fn generator_blocks(split: &DriftSplit, grid: &Grid) -> Result<GeneratorBlocks> {
    ensure_hermitian(&split.c1h)?;
    ensure_hermitian(&split.c2h)?;
    let blocks = grid.eta_points().iter().map(|&eta| -(&split.c1h * c64(eta, 0.0) + &split.c2h)).collect();
    Ok(GeneratorBlocks { blocks, eta: grid.eta_points().to_vec() })
}

/// Dense H_tot in component-major ordering, index (i, l) ↦ i·N + l.
pub fn assemble_htot(c: &ComplexMatrix, grid: &Grid) -> Result<ComplexMatrix> {
    let d = ensure_square(c)?;
    let n = grid.n();
    let size = d * n;
    if size > MAX_HTOT_DIM {
        return Err(SchroError::SizeOverflow { size, limit: MAX_HTOT_DIM });
    }
    let eta = ComplexVector::from_iterator(n, grid.eta_points().iter().map(|&e| c64(e, 0.0)));
    let d_diag = ComplexMatrix::from_diagonal(&eta);
    let i_n = ComplexMatrix::identity(n, n);
    let i_d = ComplexMatrix::identity(d, d);
    let half = c64(0.5, 0.0);
    let minus_i = &d_diag - &i_n * Complex64::I;
    let plus_i = &d_diag + &i_n * Complex64::I;
    let htot = -(c.kronecker(&minus_i) * half) - c.adjoint().kronecker(&plus_i) * half + i_d.kronecker(&d_diag);
    Ok(htot)
}

/// Propagates every mode column by exp(−i·t·H_l).
pub fn evolve(state: &SpectralState, gen: &GeneratorBlocks, t: f64) -> Result<SpectralState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(SchroError::InvalidArgument(format!("evolution time must be finite and >= 0, got {t}")));
    }
    let dim = state.values.nrows();
    if state.values.ncols() != gen.blocks.len() || gen.dim() != dim {
        return Err(SchroError::DimensionMismatch(format!(
            "state is {}x{} but generator has {} blocks of size {}",
            dim,
            state.values.ncols(),
            gen.blocks.len(),
            gen.dim()
        )));
    }
    if t == 0.0 {
        return Ok(state.clone());
    }
    let mut values = state.values.clone();
    // Column-major storage: each mode column is a contiguous chunk.
    values.as_mut_slice().par_chunks_mut(dim).zip(gen.blocks.par_iter()).try_for_each(
        |(column, block)| -> Result<()> {
            let eig = hermitian_eigen(block)?;
            let u = hermitian_propagator(&eig, t);
            let v = ComplexVector::from_column_slice(column);
            column.copy_from_slice((u * v).as_slice());
            Ok(())
        },
    )?;
    Ok(SpectralState { values, time: state.time + t })
}

/// ⟨ṽ|(I⊗O)|ṽ⟩ with and without division by ⟨ṽ|ṽ⟩.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObservableEstimate {
    pub raw: (f64, f64),
    pub normalized: (f64, f64),
}

/// Expectation of a component observable read directly from the spectral
/// state, with no inverse transform. By Parseval this weights every p
/// (including p < 0), so it reproduces ⟨x(t)|O|x(t)⟩/‖x(t)‖² when every
/// p slice is proportional to x(t), e.g. at t = 0 or when C₁ is a multiple of
/// the identity.
pub fn expectation_without_recovery(state: &SpectralState, observable: &ComplexMatrix) -> Result<ObservableEstimate> {
    ensure_hermitian(observable)?;
    if observable.nrows() != state.values.nrows() {
        return Err(SchroError::DimensionMismatch(format!(
            "observable is {}x{} but state has {} components",
            observable.nrows(),
            observable.ncols(),
            state.values.nrows()
        )));
    }
    let applied = observable * &state.values;
    let raw = state.values.dotc(&applied);
    let mass = state.values.norm_squared();
    if mass == 0.0 {
        return Err(SchroError::DegenerateState("spectral state has zero norm".into()));
    }
    let normalized = raw / mass;
    Ok(ObservableEstimate { raw: (raw.re, raw.im), normalized: (normalized.re, normalized.im) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{real_matrix, split};

    #[test]
    fn scalar_block() {
        let s = split(&real_matrix(1, 1, &[0.5])).unwrap();
        let g = Grid::new(4, std::f64::consts::PI).unwrap();
        let gen = generator_blocks(&s, &g).unwrap();
        // η = 2 is the last mode
        assert!((gen.blocks[3][(0, 0)] - c64(1.0, 0.0)).norm() < 1e-15);
        // η = 0 gives −C₂
        let zero = g.eta_points().iter().position(|&e| e == 0.0).unwrap();
        assert_eq!(gen.blocks[zero], -&s.c2h);
    }

    #[test]
    fn scalar_htot_is_scaled_d() {
        let g = Grid::new(4, std::f64::consts::PI).unwrap();
        let h = assemble_htot(&real_matrix(1, 1, &[0.5]), &g).unwrap();
        for (l, eta) in g.eta_points().iter().enumerate() {
            for k in 0..4 {
                let expected = if k == l { 0.5 * eta } else { 0.0 };
                assert!((h[(l, k)] - c64(expected, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn htot_size_guard() {
        let g = Grid::new(1024, 1.0).unwrap();
        let err = assemble_htot(&ComplexMatrix::identity(5, 5), &g).unwrap_err();
        assert_eq!(err.code(), "size-overflow");
    }

    #[test]
    fn evolve_zero_time_is_identity() {
        let s = split(&real_matrix(2, 2, &[0.5, 0.2, 0.0, 0.7])).unwrap();
        let g = Grid::new(8, 4.0).unwrap();
        let gen = generator_blocks(&s, &g).unwrap();
        let st = SpectralState { values: ComplexMatrix::from_fn(2, 8, |i, l| c64(i as f64, l as f64)), time: 0.0 };
        assert_eq!(evolve(&st, &gen, 0.0).unwrap(), st);
        assert!(evolve(&st, &gen, -1.0).is_err());
    }

    #[test]
    fn scalar_amplitude_constant() {
        let s = split(&real_matrix(1, 1, &[0.5])).unwrap();
        let g = Grid::new(8, 4.0).unwrap();
        let gen = generator_blocks(&s, &g).unwrap();
        let st = SpectralState { values: ComplexMatrix::from_element(1, 8, c64(0.3, -0.4)), time: 0.0 };
        for t in [0.5, 3.0, 17.0] {
            let out = evolve(&st, &gen, t).unwrap();
            assert!(out.values.iter().all(|z| (z.norm() - 0.5).abs() < 1e-14));
        }
    }

    #[test]
    fn identity_observable_normalizes_to_one() {
        let st =
            SpectralState { values: ComplexMatrix::from_fn(3, 8, |i, l| c64(i as f64 + 1.0, l as f64)), time: 0.0 };
        let est = expectation_without_recovery(&st, &ComplexMatrix::identity(3, 3)).unwrap();
        assert!((est.normalized.0 - 1.0).abs() < 1e-14);
        assert!(est.normalized.1.abs() < 1e-14);
        let bad = real_matrix(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(expectation_without_recovery(&st, &bad).unwrap_err().code(), "not-hermitian");
    }
}
