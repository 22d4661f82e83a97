mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use schro_core::baselines::direct_solve;
use schro_core::linalg::{
    augment, c64, deaugment, fidelity, general_eigen, hermitian_deviation, normalized, split, ComplexMatrix,
};
use schro_core::schrodingerization::{
    assemble_htot, evolve, forward_transform, generator_blocks, initial_warped_state, inverse_transform, Grid,
    SpectralState,
};
use schro_core::solvers::{
    build_splitting, eigenvalue_from_state, estimate_tf, estimate_tmax, iteration_matrix, SplittingMethod,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn identity(d: usize) -> ComplexMatrix {
    ComplexMatrix::identity(d, d)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn split_reconstructs_drift_and_matrix(seed in any::<u64>(), d in 1usize..9) {
        let c = common::complex_matrix(&mut rng(seed), d, d);
        let s = split(&c).unwrap();
        let i = c64(0.0, 1.0);
        prop_assert!(common::max_abs(&(&s.c1h + &s.c2h * i - (&c - identity(d)))) <= 1e-14);
        prop_assert!(common::max_abs(&(&s.obs_c1 + &s.obs_c2 * i - &c)) <= 1e-14);
        for h in [&s.c1h, &s.c2h, &s.obs_c1, &s.obs_c2] {
            prop_assert!(hermitian_deviation(h) == 0.0);
        }
    }

    #[test]
    fn augmentation_round_trip(seed in any::<u64>(), d in 1usize..9) {
        let mut r = rng(seed);
        let g_matrix = common::complex_matrix(&mut r, d, d);
        let g_vector = common::complex_vector(&mut r, d);
        let y = common::complex_vector(&mut r, d);
        let sys = augment(&g_matrix, &g_vector).unwrap();
        let x = y.clone().insert_row(d, Complex64::ONE);
        let next = deaugment(&(&sys.c * x)).unwrap();
        let expected = &g_matrix * &y + &g_vector;
        prop_assert!((next - expected).norm() <= 1e-12 * (1.0 + y.norm()));
    }

    #[test]
    fn trace_is_sum_of_eigenvalues(seed in any::<u64>(), d in 1usize..9) {
        let c = common::complex_matrix(&mut rng(seed), d, d);
        let eig = general_eigen(&c).unwrap();
        let sum: Complex64 = eig.values.iter().sum();
        prop_assert!((sum - c.trace()).norm() <= 1e-10);
    }

    #[test]
    fn htot_is_hermitian_and_block_diagonal(seed in any::<u64>(), d in 1usize..9, k in 2u32..5, l in 1.0f64..12.0) {
        let n = 1usize << k;
        let c = common::complex_matrix(&mut rng(seed), d, d);
        let grid = Grid::new(n, l).unwrap();
        let htot = assemble_htot(&c, &grid).unwrap();
        let gen = generator_blocks(&split(&c).unwrap(), &grid).unwrap();
        prop_assert!(hermitian_deviation(&htot) <= 1e-12);
        for (m, block) in gen.blocks.iter().enumerate() {
            prop_assert!(hermitian_deviation(block) <= 1e-12);
            for i in 0..d {
                for j in 0..d {
                    for q in 0..n {
                        let expected = if q == m { block[(i, j)] } else { Complex64::ZERO };
                        prop_assert!((htot[(i * n + m, j * n + q)] - expected).norm() <= 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn evolution_preserves_norm(seed in any::<u64>(), d in 1usize..7, k in 2u32..8, t in 0.0f64..50.0) {
        let mut r = rng(seed);
        let n = 1usize << k;
        let c = common::complex_matrix(&mut r, d, d);
        let grid = Grid::new(n, r.gen_range(2.0..20.0)).unwrap();
        let gen = generator_blocks(&split(&c).unwrap(), &grid).unwrap();
        let state = SpectralState { values: common::complex_matrix(&mut r, d, n), time: 0.0 };
        let out = evolve(&state, &gen, t).unwrap();
        prop_assert!((out.values.norm() - state.values.norm()).abs() <= 1e-10 * state.values.norm());
        prop_assert!((out.time - t).abs() <= 1e-15);
    }

    #[test]
    fn transform_round_trip(seed in any::<u64>(), d in 1usize..7, k in 2u32..10, l in 1.0f64..30.0) {
        let n = 1usize << k;
        let grid = Grid::new(n, l).unwrap();
        let x0 = common::complex_vector(&mut rng(seed), d);
        let w = initial_warped_state(&x0, &grid).unwrap();
        let back = inverse_transform(&forward_transform(&w, &grid).unwrap(), &grid).unwrap();
        prop_assert!(common::max_abs(&(&back.values - &w.values)) <= 1e-12);
    }

    #[test]
    fn splitting_fixed_point_is_the_solution(seed in any::<u64>(), d in 1usize..10, a in 0.1f64..1.0) {
        let mut r = rng(seed);
        let mat = common::dominant(&mut r, d);
        let b = common::real_vector(&mut r, d);
        let y = direct_solve(&mat, &b).unwrap();
        for method in [SplittingMethod::Jacobi, SplittingMethod::Richardson { a }, SplittingMethod::DampedJacobi { a }] {
            let s = build_splitting(&mat, &b, method).unwrap();
            let residual = (&s.g_matrix * &y + &s.g_vector - &y).norm();
            prop_assert!(residual <= 1e-10 * (1.0 + y.norm()), "{method:?}: {residual:e}");
        }
    }

    #[test]
    fn augmented_matrix_has_steady_eigenvector(seed in any::<u64>(), d in 1usize..10) {
        let mut r = rng(seed);
        let mat = common::dominant(&mut r, d);
        let b = common::real_vector(&mut r, d);
        let c = iteration_matrix(&build_splitting(&mat, &b, SplittingMethod::Jacobi).unwrap()).unwrap().c;
        let eig = general_eigen(&c).unwrap();
        let (k, value) = eig
            .values
            .iter()
            .enumerate()
            .min_by(|p, q| (p.1 - Complex64::ONE).norm().total_cmp(&(q.1 - Complex64::ONE).norm()))
            .unwrap();
        prop_assert!((value - Complex64::ONE).norm() <= 1e-8);
        let steady = normalized(&direct_solve(&mat, &b).unwrap().insert_row(d, Complex64::ONE)).unwrap();
        prop_assert!(fidelity(&eig.vectors.column(k).into_owned(), &steady) >= 1.0 - 1e-8);
    }

    #[test]
    fn trace_bound_near_the_top_eigenvector(seed in any::<u64>(), d in 2usize..9, spread in 0.0f64..0.3) {
        let mut r = rng(seed);
        let (c, values) = common::real_spectrum(&mut r, d, 0.1);
        let eig = general_eigen(&c).unwrap();
        let top = eig.vectors.column(0).into_owned();
        let x = normalized(&(&top + common::complex_vector(&mut r, d) * c64(spread, 0.0))).unwrap();
        let f = fidelity(&x, &top);
        prop_assume!(f >= 0.9);
        let err = (eigenvalue_from_state(&x, &c).unwrap() - c64(values[0], 0.0)).norm();
        prop_assert!(c.norm() * (2.0 - f).sqrt() >= err);
    }

    #[test]
    fn stopping_times_shrink_as_tolerance_grows(
        alpha in 0.01f64..0.99,
        gap in 0.05f64..2.0,
        d1 in 1e-6f64..0.5,
        d2 in 1e-6f64..0.5,
    ) {
        let (lo, hi) = if d1 < d2 { (d1, d2) } else { (d2, d1) };
        let t_lo = estimate_tf(alpha, None, gap, lo, 0.0).unwrap();
        let t_hi = estimate_tf(alpha, None, gap, hi, 0.0).unwrap();
        prop_assert!(t_hi >= 0.0 && t_hi <= t_lo);
        let m_lo = estimate_tmax(alpha, gap, lo, 1.0).unwrap();
        let m_hi = estimate_tmax(alpha, gap, hi, 1.0).unwrap();
        prop_assert!(m_hi >= 0.0 && m_hi <= m_lo);
    }
}
