//! Property tests: factorization identities, spectral-function laws, manifold
//! round trips, and coefficient-solver invariants on randomized inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use riemna::accel::solve_coefficients;
use riemna::linalg::{expm_sym, logm, qr_positive, sym_eig, DenseMatrix};
use riemna::manifold::{self, Manifold};

fn randn_matrix(rows: usize, cols: usize, seed: u64) -> DenseMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| {
        rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal)
    })
}

fn random_symmetric(n: usize, seed: u64) -> DenseMatrix<f64> {
    randn_matrix(n, n, seed).sym_part()
}

fn random_spd(n: usize, seed: u64) -> DenseMatrix<f64> {
    let g = randn_matrix(n, n, seed);
    (&g * &g.transpose()).axpy(0.5, &DenseMatrix::identity(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs_and_is_orthogonal(n in 1usize..8, seed in 0u64..1_000_000) {
        let m = random_symmetric(n, seed);
        let e = sym_eig(&m).unwrap();
        let back = e.recompose(|w| w);
        prop_assert!((&back - &m).norm_max() <= 1e-10 * m.norm_max().max(1.0));
        let vtv = &e.vectors.transpose() * &e.vectors;
        prop_assert!((&vtv - &DenseMatrix::identity(n)).norm_max() <= 1e-10);
        for w in e.values.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn qr_reconstructs_with_positive_diagonal(rows in 1usize..12, extra in 0usize..6, seed in 0u64..1_000_000) {
        let cols = 1 + extra.min(rows - 1).min(rows.saturating_sub(1));
        let cols = cols.min(rows);
        let m = randn_matrix(rows, cols, seed);
        let (q, r) = qr_positive(&m).unwrap();
        prop_assert!((&(&q * &r) - &m).norm_fro() <= 1e-10 * m.norm_fro().max(1.0));
        let qtq = &q.transpose() * &q;
        prop_assert!((&qtq - &DenseMatrix::identity(cols)).norm_max() <= 1e-10);
        for k in 0..cols {
            prop_assert!(r[(k, k)] > 0.0);
        }
    }

    #[test]
    fn spectral_functions_commute_with_conjugation(n in 1usize..7, seed in 0u64..1_000_000) {
        // f(VᵀMV) = Vᵀ f(M) V for orthogonal V
        let m = random_spd(n, seed);
        let (v, _) = qr_positive(&randn_matrix(n, n, seed ^ 0x9e3779b9)).unwrap();
        let conj = (&(&v.transpose() * &m) * &v).sym_part();
        let lhs = logm(&conj).unwrap();
        let rhs = &(&v.transpose() * &logm(&m).unwrap()) * &v;
        prop_assert!((&lhs - &rhs).norm_max() <= 1e-9 * m.norm_max().max(1.0));
    }

    #[test]
    fn exp_log_round_trip_spd(n in 1usize..6, seed in 0u64..1_000_000) {
        let m = random_spd(n, seed);
        let back = expm_sym(&logm(&m).unwrap()).unwrap();
        prop_assert!((&back - &m).norm_fro() <= 1e-9 * m.norm_fro());
    }

    #[test]
    fn exact_mode_round_trips(seed in 0u64..1_000_000, which in 0usize..2) {
        // exp/log round trip within 1e-8 at distances <= 1
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = if which == 0 { Manifold::Sphere { dim: 6 } } else { Manifold::Spd { dim: 3 } };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 0.8);
        let y = manifold::exp(&x, &u).unwrap();
        let back = manifold::log(&x, &y).unwrap();
        prop_assert!((back.value() - u.value()).norm_max() <= 1e-8);
        let again = manifold::exp(&x, &back).unwrap();
        prop_assert!(again.same_point(&y, 1e-8));
    }

    #[test]
    fn retraction_round_trips(seed in 0u64..1_000_000, which in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = if which == 0 {
            Manifold::Stiefel { rows: 7, cols: 3 }
        } else {
            Manifold::Grassmann { rows: 7, cols: 3 }
        };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 0.5);
        let y = manifold::retract(&x, &u).unwrap();
        man.check_point(y.value()).unwrap();
        let back = manifold::inv_retract(&x, &y).unwrap();
        prop_assert!((back.value() - u.value()).norm_max() <= 1e-8);
    }

    #[test]
    fn metric_compatibility_along_geodesics(seed in 0u64..1_000_000, t in 0.0f64..0.5, which in 0usize..2) {
        // dist(x, exp(x, t·u)) = t for unit u
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = if which == 0 { Manifold::Sphere { dim: 5 } } else { Manifold::Spd { dim: 3 } };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 1.0);
        let y = manifold::exp(&x, &u.scale(t)).unwrap();
        prop_assert!((manifold::dist(&x, &y).unwrap() - t).abs() <= 1e-8);
    }

    #[test]
    fn retraction_mode_is_bit_identical_on_exact_manifolds(seed in 0u64..1_000_000, which in 0usize..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = if which == 0 { Manifold::Sphere { dim: 5 } } else { Manifold::Spd { dim: 3 } };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 0.4);
        let via_exp = manifold::exp(&x, &u).unwrap();
        let via_retract = manifold::retract(&x, &u).unwrap();
        prop_assert_eq!(via_exp.value().as_slice(), via_retract.value().as_slice());
        let back_log = manifold::log(&x, &via_exp).unwrap();
        let back_inv = manifold::inv_retract(&x, &via_exp).unwrap();
        prop_assert_eq!(back_log.value().as_slice(), back_inv.value().as_slice());
    }

    #[test]
    fn sphere_triangle_inequality(seed in 0u64..1_000_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = Manifold::Sphere { dim: 4 };
        let a = manifold::random_point::<f64, _>(man, &mut rng);
        let b = manifold::random_point::<f64, _>(man, &mut rng);
        let c = manifold::random_point::<f64, _>(man, &mut rng);
        let ab = manifold::dist(&a, &b).unwrap();
        let bc = manifold::dist(&b, &c).unwrap();
        let ac = manifold::dist(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-8);
        prop_assert!((manifold::dist(&b, &a).unwrap() - ab).abs() <= 1e-8);
    }

    #[test]
    fn transported_vectors_stay_tangent(seed in 0u64..1_000_000, which in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let man = match which {
            0 => Manifold::Sphere { dim: 6 },
            1 => Manifold::Spd { dim: 3 },
            2 => Manifold::Stiefel { rows: 6, cols: 2 },
            _ => Manifold::Grassmann { rows: 6, cols: 2 },
        };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let y = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 1.0);
        let t = manifold::transport(&u, &y).unwrap();
        // constructing through the validating constructor enforces tangency
        prop_assert!(manifold::TangentVec::new(y.clone(), t.value().clone()).is_ok());
    }

    #[test]
    fn coefficients_sum_to_one_and_beat_uniform(n in 2usize..8, seed in 0u64..1_000_000, lam_exp in 1i32..12) {
        let lambda = 10f64.powi(-lam_exp);
        let b = randn_matrix(2 * n, n, seed);
        let gram = (&b.transpose() * &b).sym_part();
        let c = solve_coefficients(&gram, lambda).unwrap();
        let sum: f64 = c.weights().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-10);
        // optimality against the uniform feasible point
        let uniform: Vec<f64> = vec![1.0 / n as f64; n];
        let quad = |w: &[f64]| {
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += w[i] * gram[(i, j)] * w[j];
                }
            }
            acc + lambda * w.iter().map(|x| x * x).sum::<f64>()
        };
        prop_assert!(quad(c.weights()) <= quad(&uniform) + 1e-12);
    }
}
