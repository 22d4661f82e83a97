mod common;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schro_core::baselines::{direct_solve, exact_propagator};
use schro_core::linalg::{
    c64, fidelity, hermitian_eigen, hermitian_propagator, normalized, real_matrix, real_vector, split, ComplexMatrix,
    ComplexVector, HermitianEigen,
};
use schro_core::schrodingerization::{
    auto_grid, auto_grid_with, evolve, expectation_without_recovery, forward_transform, generator_blocks,
    initial_warped_state, propagate, propagate_with, DriftShift, Grid, PropagateOptions, RecoveryMode,
};
use schro_core::solvers::{
    build_splitting, iteration_matrix, quantum_jacobi_solve, quantum_power_method, GridSpec, PowerOptions,
    SolveOptions, SplittingMethod,
};
use schro_core::SchroError;

/// Direct evaluation of the Hermitian scheme: naive Fourier sums and
/// exp(−iηHt) per mode with H = −(C − I).
fn hermitian_reference(c: &ComplexMatrix, x0: &ComplexVector, t: f64, grid: &Grid, pstar: f64) -> ComplexVector {
    let d = c.nrows();
    let h = -(c - ComplexMatrix::identity(d, d));
    let eig = hermitian_eigen(&h).unwrap();
    let (p, eta) = (grid.p_points(), grid.eta_points());
    let j_star = grid.nearest_p_index(pstar);
    let mut w = ComplexVector::zeros(d);
    for &e in eta {
        let mut coeff = ComplexVector::zeros(d);
        for &pj in p {
            coeff += x0 * (Complex64::from_polar(1.0, e * pj) * (-pj.abs()).exp());
        }
        coeff *= c64(grid.dp() / (2.0 * std::f64::consts::PI), 0.0);
        let scaled = hermitian_eigen_scaled(&eig, e);
        let evolved = hermitian_propagator(&scaled, t) * coeff;
        w += evolved * Complex64::from_polar(grid.d_eta(), -e * p[j_star]);
    }
    w * c64(p[j_star].exp(), 0.0)
}

fn hermitian_eigen_scaled(eig: &HermitianEigen, eta: f64) -> HermitianEigen {
    let mut out = eig.clone();
    out.values.iter_mut().for_each(|v| *v *= eta);
    out
}

#[test]
fn scalar_decay_matches_closed_form() {
    let c = real_matrix(1, 1, &[0.5]);
    let grid = auto_grid(&c, 1.0, 256).unwrap();
    let r = propagate(&c, &real_vector(&[1.0]), 1.0, &grid).unwrap();
    assert_abs_diff_eq!(r.x[0].re, (-0.5f64).exp(), epsilon = 1e-3);
    assert_abs_diff_eq!(r.x[0].im, 0.0, epsilon = 1e-12);
}

#[test]
fn zero_time_returns_initial_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = common::dissipative(&mut rng, 5);
    let x0 = common::complex_vector(&mut rng, 5);
    let grid = auto_grid(&c, 0.0, 256).unwrap();
    let r = propagate(&c, &x0, 0.0, &grid).unwrap();
    assert!(fidelity(&r.state, &x0) >= 1.0 - 1e-3);
}

#[test]
fn identity_matrix_keeps_state() {
    let c = ComplexMatrix::identity(3, 3);
    let x0 = ComplexVector::from_vec(vec![c64(1.0, 0.5), c64(-0.3, 0.0), c64(0.2, -1.0)]);
    for t in [0.5, 3.0, 20.0] {
        let grid = auto_grid(&c, t, 128).unwrap();
        let r = propagate(&c, &x0, t, &grid).unwrap();
        assert!(fidelity(&r.state, &x0) >= 1.0 - 1e-10, "t = {t}");
        assert!((&r.x - &x0).norm() <= 1e-3 * x0.norm(), "t = {t}");
    }
}

#[test]
fn jacobi_matrix_reaches_steady_direction() {
    let a = real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    let b = real_vector(&[1.0, 2.0]);
    let c = iteration_matrix(&build_splitting(&a, &b, SplittingMethod::Jacobi).unwrap()).unwrap().c;
    let x0 = real_vector(&[0.0, 0.0, 1.0]);
    let t = 25.0;
    let grid = auto_grid(&c, t, 512).unwrap();
    let r = propagate(&c, &x0, t, &grid).unwrap();
    let expected = normalized(&real_vector(&[0.2, 0.6, 1.0])).unwrap();
    for i in 0..3 {
        assert_abs_diff_eq!(r.state[i].re, expected[i].re, epsilon = 1e-2);
    }
    assert_abs_diff_eq!(expected[0].re, 0.169, epsilon = 1e-3);
    assert_abs_diff_eq!(expected[1].re, 0.507, epsilon = 1e-3);
    assert_abs_diff_eq!(expected[2].re, 0.845, epsilon = 1e-3);
}

#[test]
fn hermitian_pipeline_matches_direct_scheme() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for d in [1, 2, 4] {
        let c = common::dissipative(&mut rng, d);
        let c = (&c + c.adjoint()) * c64(0.5, 0.0);
        let x0 = common::complex_vector(&mut rng, d);
        let t = 2.0;
        let grid = auto_grid(&c, t, 64).unwrap();
        let ours = propagate(&c, &x0, t, &grid).unwrap().x;
        let reference = hermitian_reference(&c, &x0, t, &grid, 1.0);
        assert!((&ours - &reference).norm() <= 1e-10 * reference.norm(), "d = {d}");
    }
}

#[test]
fn infidelity_falls_with_grid_size() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let c = common::dissipative(&mut rng, 6);
    let x0 = common::complex_vector(&mut rng, 6);
    let t = 2.0;
    let exact = exact_propagator(&c, &x0, t).unwrap();
    let infid = |n| 1.0 - fidelity(&propagate(&c, &x0, t, &auto_grid(&c, t, n).unwrap()).unwrap().state, &exact);
    assert!(infid(512) < infid(64));
    assert!(infid(512) <= 1e-3);
}

#[test]
fn recovery_modes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let c = common::dissipative(&mut rng, 4);
    let x0 = common::complex_vector(&mut rng, 4);
    let t = 3.0;
    let grid = auto_grid(&c, t, 512).unwrap();
    let exact = exact_propagator(&c, &x0, t).unwrap();
    for mode in [RecoveryMode::AtPstar { pstar: 1.0 }, RecoveryMode::AtPstar { pstar: 2.0 }, RecoveryMode::SumPositive]
    {
        let opts = PropagateOptions { recovery: mode, ..PropagateOptions::default() };
        let r = propagate_with(&c, &x0, t, &grid, &opts).unwrap().recovered;
        assert!(fidelity(&r.state, &exact) >= 1.0 - 1e-3, "{mode:?}");
    }
}

#[test]
fn drift_shift_restores_growth() {
    // Hermitian part of C − I has eigenvalue +0.2, so growth must be restored.
    let c = real_matrix(2, 2, &[1.2, 0.0, 0.0, 0.5]);
    let x0 = real_vector(&[1.0, 1.0]);
    let t = 2.0;
    let exact = exact_propagator(&c, &x0, t).unwrap();
    for shift in [DriftShift::Positive, DriftShift::Full] {
        let opts = PropagateOptions { drift_shift: shift, ..PropagateOptions::default() };
        let grid = auto_grid_with(&c, t, 512, shift).unwrap();
        let run = propagate_with(&c, &x0, t, &grid, &opts).unwrap();
        assert_abs_diff_eq!(run.drift_shift, 0.2, epsilon = 1e-12);
        assert!((&run.recovered.x - &exact).norm() <= 1e-2 * exact.norm(), "{shift:?}");
    }
}

#[test]
fn full_shift_keeps_decaying_direction() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let c = common::dissipative(&mut rng, 4);
    let x0 = common::complex_vector(&mut rng, 4);
    let t = 8.0;
    let exact = exact_propagator(&c, &x0, t).unwrap();
    let opts = PropagateOptions { drift_shift: DriftShift::Full, ..PropagateOptions::default() };
    let grid = auto_grid_with(&c, t, 512, DriftShift::Full).unwrap();
    let run = propagate_with(&c, &x0, t, &grid, &opts).unwrap();
    assert!(run.drift_shift < 0.0);
    assert!(fidelity(&run.recovered.state, &exact) >= 1.0 - 1e-3);
    assert!((&run.recovered.x - &exact).norm() <= 1e-2 * exact.norm());
}

#[test]
fn observables_without_recovery() {
    let c = real_matrix(2, 2, &[0.5, 0.0, 0.0, 0.5]);
    let x0 = real_vector(&[0.6, 0.8]);
    let grid = Grid::new(256, 8.0).unwrap();
    let spectral = forward_transform(&initial_warped_state(&x0, &grid).unwrap(), &grid).unwrap();
    let gen = generator_blocks(&split(&c).unwrap(), &grid).unwrap();
    let state = evolve(&spectral, &gen, 1.5).unwrap();
    let identity = expectation_without_recovery(&state, &ComplexMatrix::identity(2, 2)).unwrap();
    assert_abs_diff_eq!(identity.normalized.0, 1.0, epsilon = 1e-12);
    // C₁ is a multiple of I, so every p slice stays parallel to x(t).
    let projector = real_matrix(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let population = expectation_without_recovery(&state, &projector).unwrap();
    let exact = exact_propagator(&c, &x0, 1.5).unwrap();
    assert_abs_diff_eq!(population.normalized.0, exact[0].norm_sqr() / exact.norm_squared(), epsilon = 1e-6);
}

#[test]
fn jacobi_solve_on_diagonal_system() {
    let a = real_matrix(3, 3, &[2.0, 0.0, 0.0, 0.0, 4.0, 0.0, 0.0, 0.0, -1.0]);
    let b = real_vector(&[1.0, 2.0, 3.0]);
    let r = quantum_jacobi_solve(&a, &b, &ComplexVector::zeros(3), &SolveOptions::default()).unwrap();
    assert_abs_diff_eq!(r.convergence.gap, 1.0, epsilon = 1e-12);
    assert!(r.fidelity >= 1.0 - 1e-3);
}

#[test]
fn other_splittings_solve() {
    let a = real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    let b = real_vector(&[1.0, 2.0]);
    let y = direct_solve(&a, &b).unwrap();
    for method in [SplittingMethod::Richardson { a: 0.3 }, SplittingMethod::DampedJacobi { a: 0.8 }] {
        let opts = SolveOptions { method, ..SolveOptions::default() };
        let r = quantum_jacobi_solve(&a, &b, &ComplexVector::zeros(2), &opts).unwrap();
        assert!(r.fidelity >= 1.0 - 1e-3, "{method:?}");
        assert!((&r.y_classical - &y).norm() <= 5e-2 * y.norm(), "{method:?}");
    }
}

#[test]
fn divergent_richardson_is_rejected() {
    let a = real_matrix(2, 2, &[2.0, 1.0, 1.0, 3.0]);
    let b = real_vector(&[1.0, 2.0]);
    let opts = SolveOptions { method: SplittingMethod::Richardson { a: 1.0 }, ..SolveOptions::default() };
    let err = quantum_jacobi_solve(&a, &b, &ComplexVector::zeros(2), &opts).unwrap_err();
    assert!(matches!(err, SchroError::ConvergenceUnsafe(_)));
}

#[test]
fn power_method_on_random_spectra() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for d in [3, 6, 10] {
        let (c, values) = common::real_spectrum(&mut rng, d, 0.2);
        let x0 = ComplexVector::from_element(d, Complex64::ONE);
        let opts = PowerOptions { epsilon: 0.01, grid: GridSpec::default(), ..PowerOptions::default() };
        let r = quantum_power_method(&c, &x0, &opts).unwrap();
        let err = (r.eigenvalue_estimate - c64(values[0], 0.0)).norm();
        assert!(err <= 0.01, "d = {d}: {err}");
        assert!(r.eigenvalue_error_bound >= err);
    }
}
