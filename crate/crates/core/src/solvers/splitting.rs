use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchroError};
use crate::linalg::{augment, ensure_square, AugmentedSystem, ComplexMatrix, ComplexVector};

/// Stationary splittings A = B + N with an explicitly invertible B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum SplittingMethod {
    /// B = Λ, the diagonal of A.
    Jacobi,
    /// B = I/a.
    Richardson { a: f64 },
    /// B = Λ/a.
    DampedJacobi { a: f64 },
}

#[derive(Debug, Clone)]
pub struct Splitting {
    pub method: SplittingMethod,
    /// Diagonal part of A.
    pub lambda: ComplexMatrix,
    /// Off-diagonal part of A.
    pub m: ComplexMatrix,
    pub g_matrix: ComplexMatrix,
    pub g_vector: ComplexVector,
}

fn inverse_diagonal(a: &ComplexMatrix) -> Result<ComplexVector> {
    let d = a.nrows();
    let mut inv = ComplexVector::zeros(d);
    for i in 0..d {
        let aii = a[(i, i)];
        if aii == Complex64::ZERO {
            return Err(SchroError::ZeroDiagonal { row: i });
        }
        inv[i] = aii.inv();
    }
    Ok(inv)
}

pub fn build_splitting(a: &ComplexMatrix, b: &ComplexVector, method: SplittingMethod) -> Result<Splitting> {
    let d = ensure_square(a)?;
    if b.len() != d {
        return Err(SchroError::DimensionMismatch(format!("A is {d}x{d} but b has length {}", b.len())));
    }
    crate::linalg::ensure_finite_matrix(a, "A")?;
    crate::linalg::ensure_finite_vector(b, "b")?;
    let lambda = ComplexMatrix::from_diagonal(&a.diagonal());
    let m = a - &lambda;
    let identity = ComplexMatrix::identity(d, d);
    let (g_matrix, g_vector) = match method {
        SplittingMethod::Jacobi => {
            let inv = inverse_diagonal(a)?;
            let scale = ComplexMatrix::from_diagonal(&inv);
            (-(&scale * &m), scale * b)
        }
        SplittingMethod::Richardson { a: step } => {
            if step == 0.0 || !step.is_finite() {
                return Err(SchroError::InvalidArgument(format!("Richardson parameter must be nonzero, got {step}")));
            }
            let s = Complex64::new(step, 0.0);
            (identity - a * s, b * s)
        }
        SplittingMethod::DampedJacobi { a: step } => {
            if step == 0.0 || step == 1.0 || !step.is_finite() {
                return Err(SchroError::InvalidArgument(format!(
                    "damped Jacobi parameter must differ from 0 and 1, got {step}"
                )));
            }
            let inv = inverse_diagonal(a)?;
            let scale = ComplexMatrix::from_diagonal(&inv) * Complex64::new(step, 0.0);
            (identity - &scale * a, scale * b)
        }
    };
    Ok(Splitting { method, lambda, m, g_matrix, g_vector })
}

/// The augmented C = [[G, g], [0ᵀ, 1]] whose steady state encodes A⁻¹b.
pub fn iteration_matrix(s: &Splitting) -> Result<AugmentedSystem> {
    augment(&s.g_matrix, &s.g_vector)
}
