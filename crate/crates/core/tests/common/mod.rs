//! Seeded random instances shared by the integration suites.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use schro_core::linalg::{c64, ComplexMatrix, ComplexVector};

pub fn complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn complex_vector(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector::from_fn(d, |_, _| c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

pub fn real_vector(rng: &mut ChaCha8Rng, d: usize) -> ComplexVector {
    ComplexVector::from_fn(d, |_, _| c64(rng.gen_range(-1.0..1.0), 0.0))
}

/// C = I − s·B†B + (K − K†)/2, so the Hermitian part of C − I is −s·B†B ≤ 0.
pub fn dissipative(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let b = complex_matrix(rng, d, d);
    let k = complex_matrix(rng, d, d);
    let scale = c64(0.5 / d as f64, 0.0);
    ComplexMatrix::identity(d, d) - b.adjoint() * &b * scale + (&k - k.adjoint()) * c64(0.5, 0.0)
}

/// Real A with |A_ii| between 1.2 and 2 times the off-diagonal row sum.
pub fn dominant(rng: &mut ChaCha8Rng, d: usize) -> ComplexMatrix {
    let mut a = ComplexMatrix::from_fn(d, d, |_, _| c64(rng.gen_range(-1.0..1.0), 0.0));
    for i in 0..d {
        let off: f64 = (0..d).filter(|&j| j != i).map(|j| a[(i, j)].norm()).sum();
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        a[(i, i)] = c64(sign * off.max(0.1) * rng.gen_range(1.2..2.0), 0.0);
    }
    a
}

/// S·diag(λ)·S⁻¹ with a near-identity S: diagonalisable, real spectrum in
/// (0, 1), top eigenvalue separated from the rest by at least `gap`.
pub fn real_spectrum(rng: &mut ChaCha8Rng, d: usize, gap: f64) -> (ComplexMatrix, Vec<f64>) {
    let top = rng.gen_range(0.8..0.95);
    let mut values = vec![top];
    values.extend((1..d).map(|_| rng.gen_range(0.05..top - gap)));
    let s = ComplexMatrix::identity(d, d)
        + ComplexMatrix::from_fn(d, d, |_, _| c64(rng.gen_range(-0.1..0.1) / (d as f64).sqrt(), 0.0));
    let s_inv = s.clone().try_inverse().expect("near-identity S is invertible");
    let lambda = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(d, values.iter().map(|&v| c64(v, 0.0))));
    (s * lambda * s_inv, values)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z: &Complex64| z.norm()).fold(0.0, f64::max)
}
