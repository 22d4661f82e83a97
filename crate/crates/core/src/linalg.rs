//! Dense complex linear algebra shared by the rest of the crate: system
//! augmentation, Hermitian splits, general and Hermitian eigendecompositions
//! and spectral diagnostics.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, SchroError};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Entrywise tolerance for Hermiticity and split reconstruction.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Largest dimension handed to the dense eigensolvers.
pub const MAX_DENSE_DIM: usize = 512;

const DEGENERATE_LAST_ENTRY: f64 = 1e-12;

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Builds a complex matrix from real row-major data.
pub fn real_matrix(rows: usize, cols: usize, data: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_row_iterator(rows, cols, data.iter().map(|&x| c64(x, 0.0)))
}

pub fn real_vector(data: &[f64]) -> ComplexVector {
    ComplexVector::from_iterator(data.len(), data.iter().map(|&x| c64(x, 0.0)))
}

pub fn ensure_finite_matrix(m: &ComplexMatrix, what: &'static str) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(SchroError::NonFinite(what))
    }
}

pub fn ensure_finite_vector(v: &ComplexVector, what: &'static str) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(SchroError::NonFinite(what))
    }
}

pub fn ensure_square(m: &ComplexMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() {
        Ok(m.nrows())
    } else {
        Err(SchroError::NotSquare { rows: m.nrows(), cols: m.ncols() })
    }
}

/// ‖·‖_max, the largest entry modulus.
pub fn max_norm(m: &ComplexMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖H − H†‖_max.
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    max_norm(&(m - m.adjoint()))
}

pub fn ensure_hermitian(m: &ComplexMatrix) -> Result<()> {
    ensure_square(m)?;
    let deviation = hermitian_deviation(m);
    if deviation <= HERMITIAN_TOL {
        Ok(())
    } else {
        Err(SchroError::NotHermitian { deviation })
    }
}

/// Maximum number of nonzero entries in any row.
pub fn sparsity(m: &ComplexMatrix) -> usize {
    m.row_iter().map(|row| row.iter().filter(|z| **z != Complex64::ZERO).count()).max().unwrap_or(0)
}

/// Fidelity |⟨a|b⟩|² between the normalised directions of two vectors.
pub fn fidelity(a: &ComplexVector, b: &ComplexVector) -> f64 {
    let (na, nb) = (a.norm(), b.norm());
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (a.dotc(b).norm() / (na * nb)).powi(2).min(1.0)
}

pub fn normalized(v: &ComplexVector) -> Result<ComplexVector> {
    let n = v.norm();
    if n == 0.0 || !n.is_finite() {
        return Err(SchroError::DegenerateState(format!("cannot normalise vector of norm {n}")));
    }
    Ok(v.unscale(n))
}

/// ⟨v|O|v⟩ for a vector that need not be normalised.
pub fn expectation(v: &ComplexVector, op: &ComplexMatrix) -> Complex64 {
    v.dotc(&(op * v))
}

/// An affine iteration y ↦ G y + g embedded as the homogeneous map
/// x ↦ C x on x = (y, 1).
#[derive(Debug, Clone)]
pub struct AugmentedSystem {
    pub g_matrix: ComplexMatrix,
    pub g_vector: ComplexVector,
    pub c: ComplexMatrix,
}

impl AugmentedSystem {
    pub fn dim(&self) -> usize {
        self.g_vector.len()
    }
}

pub fn augment(g_matrix: &ComplexMatrix, g_vector: &ComplexVector) -> Result<AugmentedSystem> {
    let d = ensure_square(g_matrix)?;
    if g_vector.len() != d {
        return Err(SchroError::DimensionMismatch(format!("G is {d}x{d} but g has length {}", g_vector.len())));
    }
    let mut c = ComplexMatrix::zeros(d + 1, d + 1);
    c.view_mut((0, 0), (d, d)).copy_from(g_matrix);
    c.view_mut((0, d), (d, 1)).copy_from(g_vector);
    c[(d, d)] = Complex64::ONE;
    Ok(AugmentedSystem { g_matrix: g_matrix.clone(), g_vector: g_vector.clone(), c })
}

/// Inverts the augmentation: y_i = x_i / x_last.
pub fn deaugment(x: &ComplexVector) -> Result<ComplexVector> {
    let n = x.len();
    if n < 2 {
        return Err(SchroError::DimensionMismatch(format!("augmented vector needs length >= 2, got {n}")));
    }
    let last = x[n - 1];
    if last.norm() < DEGENERATE_LAST_ENTRY {
        return Err(SchroError::DegenerateState(format!("augmented component has magnitude {:e}", last.norm())));
    }
    Ok(x.rows(0, n - 1).map(|z| z / last))
}

/// Hermitian decompositions of a square C.
///
/// `c1h + i·c2h` reconstructs C − I (the drift of dx/dt = (C − I)x), while
/// `obs_c1 + i·obs_c2` reconstructs C itself and is the pair of observables
/// measured when estimating ⟨x|C|x⟩.
#[derive(Debug, Clone)]
pub struct DriftSplit {
    pub c1h: ComplexMatrix,
    pub c2h: ComplexMatrix,
    pub obs_c1: ComplexMatrix,
    pub obs_c2: ComplexMatrix,
}

impl DriftSplit {
    pub fn dim(&self) -> usize {
        self.c1h.nrows()
    }

    /// Largest eigenvalue of the Hermitian drift part. Positive values mean
    /// some characteristic of the warped transport moves toward larger p.
    pub fn drift_eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(hermitian_eigen(&self.c1h)?.values)
    }

    /// Returns the split of C − μI, i.e. c1h shifted by −μ.
    pub fn shifted(&self, mu: f64) -> DriftSplit {
        let n = self.dim();
        let mut out = self.clone();
        for i in 0..n {
            out.c1h[(i, i)] -= c64(mu, 0.0);
            out.obs_c1[(i, i)] -= c64(mu, 0.0);
        }
        out
    }
}

pub fn split(c: &ComplexMatrix) -> Result<DriftSplit> {
    let n = ensure_square(c)?;
    let adj = c.adjoint();
    let half = c64(0.5, 0.0);
    let obs_c1 = (c + &adj) * half;
    // (C − C†)/(2i) = −i (C − C†)/2
    let obs_c2 = (c - &adj) * c64(0.0, -0.5);
    let mut c1h = obs_c1.clone();
    for i in 0..n {
        c1h[(i, i)] -= Complex64::ONE;
    }
    let c2h = obs_c2.clone();
    Ok(DriftSplit { c1h, c2h, obs_c1, obs_c2 })
}

/// Real eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let n = ensure_square(h)?;
    if n == 0 {
        return Ok(HermitianEigen { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    let eig = SymmetricEigen::try_new(h.clone(), f64::EPSILON, 0)
        .ok_or_else(|| SchroError::Numerical(format!("Hermitian eigensolver did not converge (n = {n})")))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// exp(−i·t·H) for Hermitian H, through its eigendecomposition.
pub fn hermitian_propagator(eig: &HermitianEigen, t: f64) -> ComplexMatrix {
    let n = eig.values.len();
    let phases = ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        n,
        eig.values.iter().map(|&e| Complex64::from_polar(1.0, -e * t)),
    ));
    &eig.vectors * phases * eig.vectors.adjoint()
}

/// Eigenvalues with unit-norm right eigenvectors of a general complex
/// matrix, ordered by descending real part.
#[derive(Debug, Clone)]
pub struct GeneralEigen {
    pub values: Vec<Complex64>,
    pub vectors: ComplexMatrix,
}

impl GeneralEigen {
    /// Expansion coefficients of `x` in the (possibly non-orthogonal)
    /// eigenvector basis, i.e. the pairing with the dual basis V⁻¹.
    pub fn coefficients(&self, x: &ComplexVector) -> Result<ComplexVector> {
        let lu = self.vectors.clone().full_piv_lu();
        let coeffs = lu
            .solve(x)
            .ok_or_else(|| SchroError::Numerical("eigenvector basis is singular (defective matrix)".into()))?;
        let residual = (&self.vectors * &coeffs - x).norm();
        if !residual.is_finite() || residual > 1e-6 * x.norm().max(1.0) {
            return Err(SchroError::Numerical(format!(
                "eigenvector basis is ill-conditioned (expansion residual {residual:e})"
            )));
        }
        Ok(coeffs)
    }
}

/// Iteration budget for the QR sweeps, per matrix dimension.
const SCHUR_SWEEPS_PER_DIM: usize = 200;

fn is_upper_triangular(m: &ComplexMatrix) -> bool {
    (0..m.nrows()).all(|i| (0..i).all(|j| m[(i, j)] == Complex64::ZERO))
}

/// M = Q T Q† with T upper triangular. The QR sweeps can stall on inputs
/// with exactly zero structure (nalgebra never converges on a zero 3x3), so
/// triangular inputs are returned as is and a stalled run is retried on a
/// shifted copy, which has the same Schur vectors.
fn schur_form(m: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = m.nrows();
    if is_upper_triangular(m) {
        return Ok((ComplexMatrix::identity(n, n), m.clone()));
    }
    let budget = SCHUR_SWEEPS_PER_DIM * n.max(1);
    if let Some(schur) = Schur::try_new(m.clone(), f64::EPSILON, budget) {
        return Ok(schur.unpack());
    }
    let shift = c64(0.5 * max_norm(m).max(1.0), 0.0);
    let shifted = m + ComplexMatrix::identity(n, n) * shift;
    let schur = Schur::try_new(shifted, f64::EPSILON, budget)
        .ok_or_else(|| SchroError::Numerical(format!("Schur iteration did not converge (n = {n})")))?;
    let (q, mut t) = schur.unpack();
    for i in 0..n {
        t[(i, i)] -= shift;
    }
    Ok((q, t))
}

pub fn general_eigen(m: &ComplexMatrix) -> Result<GeneralEigen> {
    let n = ensure_square(m)?;
    if n > MAX_DENSE_DIM {
        return Err(SchroError::SizeOverflow { size: n, limit: MAX_DENSE_DIM });
    }
    ensure_finite_matrix(m, "eigensolver input")?;
    if n == 0 {
        return Ok(GeneralEigen { values: vec![], vectors: ComplexMatrix::zeros(0, 0) });
    }
    let (q, t) = schur_form(m)?;
    let scale = max_norm(&t);
    let small = f64::EPSILON * if scale > 0.0 { scale } else { 1.0 };

    // Eigenvectors of the upper-triangular factor by back substitution,
    // perturbing vanishing pivots for repeated eigenvalues.
    let mut tri_vectors = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut z = ComplexVector::zeros(n);
        z[k] = Complex64::ONE;
        for i in (0..k).rev() {
            let mut acc = t[(i, k)];
            for j in (i + 1)..k {
                acc += t[(i, j)] * z[j];
            }
            let mut pivot = t[(i, i)] - lambda;
            if pivot.norm() < small {
                pivot = c64(small, 0.0);
            }
            z[i] = -acc / pivot;
        }
        tri_vectors.set_column(k, &z);
    }
    let raw = q * tri_vectors;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| t[(b, b)].re.total_cmp(&t[(a, a)].re).then(t[(b, b)].im.total_cmp(&t[(a, a)].im)));
    let values = order.iter().map(|&k| t[(k, k)]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (j, &k) in order.iter().enumerate() {
        let col = raw.column(k);
        let norm = col.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(SchroError::Numerical("eigenvector back substitution failed".into()));
        }
        vectors.set_column(j, &col.unscale(norm));
    }
    Ok(GeneralEigen { values, vectors })
}

/// Spectral diagnostics of a square matrix.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    /// Eigenvalues as (re, im) pairs, descending real part.
    pub eigenvalues: Vec<(f64, f64)>,
    pub spectral_radius: f64,
    /// Distance in real part from the steady eigenvalue to the nearest other.
    pub gap: f64,
    pub diag_dominant: bool,
    pub sparsity: usize,
    pub max_norm: f64,
}

pub fn spectrum(m: &ComplexMatrix, steady_eigenvalue_hint: Option<Complex64>) -> Result<SpectrumReport> {
    let eig = general_eigen(m)?;
    let values = &eig.values;
    let spectral_radius = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let gap = steady_gap(values, steady_eigenvalue_hint);
    Ok(SpectrumReport {
        eigenvalues: values.iter().map(|z| (z.re, z.im)).collect(),
        spectral_radius,
        gap,
        diag_dominant: is_diagonally_dominant(m),
        sparsity: sparsity(m),
        max_norm: max_norm(m),
    })
}

/// Gap between the steady eigenvalue (default: largest real part) and the
/// closest real part among the remaining eigenvalues. Only one instance of
/// the steady eigenvalue is excluded, so a repeated steady value gives 0.
pub fn steady_gap(values: &[Complex64], hint: Option<Complex64>) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let steady_idx = match hint {
        Some(h) => values
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - h).norm().total_cmp(&(b.1 - h).norm()))
            .map(|(i, _)| i)
            .unwrap_or(0),
        None => values.iter().enumerate().max_by(|a, b| a.1.re.total_cmp(&b.1.re)).map(|(i, _)| i).unwrap_or(0),
    };
    let steady = values[steady_idx];
    values
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != steady_idx)
        .map(|(_, z)| (z.re - steady.re).abs())
        .fold(f64::INFINITY, f64::min)
}

/// |A_ii| ≥ Σ_{j≠i} |A_ij| for every row. Non-square input is never dominant.
pub fn is_diagonally_dominant(a: &ComplexMatrix) -> bool {
    if a.nrows() != a.ncols() {
        return false;
    }
    a.row_iter().enumerate().all(|(i, row)| {
        let off: f64 = row.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, z)| z.norm()).sum();
        row[i].norm() >= off
    })
}

/// Serialisers writing complex values as `[re, im]` pairs.
pub mod serde_complex {
    use super::ComplexVector;
    use num_complex::Complex64;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn scalar<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq([z.re, z.im])
    }

    pub fn vector<S: Serializer>(v: &ComplexVector, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for z in v.iter() {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}
