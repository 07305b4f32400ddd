//! The scalar abstraction at work: the same code paths instantiated at f32,
//! with tolerances matching single precision.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use riemna::accel::{extrapolate, solve_coefficients, RiemnaConfig};
use riemna::linalg::{logm, qr_positive, sym_eig, DenseMatrix};
use riemna::manifold::{self, Geom, GeometryMode, Manifold};
use riemna::problems::gen;
use riemna::solvers::{rgd_run, SolverConfig};

#[test]
fn linalg_kernels_work_in_single_precision() {
    let mut rng = ChaCha8Rng::seed_from_u64(201);
    let g: DenseMatrix<f32> = DenseMatrix::from_fn(5, 5, |_, _| {
        rand::Rng::sample::<f64, _>(&mut rng, rand_distr::StandardNormal) as f32
    });
    let spd = (&g * &g.transpose()).axpy(1.0f32, &DenseMatrix::identity(5));
    let eig = sym_eig(&spd).unwrap();
    let back = eig.recompose(|w| w);
    assert!((&back - &spd).norm_max() <= 1e-4 * spd.norm_max());
    assert!(logm(&spd).is_ok());
    let (q, r) = qr_positive(&g).unwrap();
    assert!((&(&q * &r) - &g).norm_fro() <= 1e-4 * g.norm_fro());
}

#[test]
fn sphere_round_trip_in_single_precision() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let man = Manifold::Sphere { dim: 6 };
    let x = manifold::random_point::<f32, _>(man, &mut rng);
    let u = manifold::random_tangent(&x, &mut rng, 0.5f32);
    let y = manifold::exp(&x, &u).unwrap();
    let back = manifold::log(&x, &y).unwrap();
    assert!((back.value() - u.value()).norm_max() <= 1e-5);
}

#[test]
fn coefficients_and_extrapolation_in_single_precision() {
    let gram = DenseMatrix::<f32>::diag(&[1.0, 4.0]);
    let c = solve_coefficients(&gram, 1.0f32).unwrap();
    assert!((c.weights()[0] - 5.0 / 7.0).abs() <= 1e-6);

    let p = gen::leading_eigenvector::<f32>(12, 50.0, 203);
    let mut rng = ChaCha8Rng::seed_from_u64(204);
    let mut x = manifold::random_point(p.manifold(), &mut rng);
    let eta = 1.0f32 / p.lipschitz().unwrap();
    let mut geom = Geom::new(GeometryMode::Exact);
    let mut pts = vec![x.clone()];
    for _ in 0..5 {
        x = riemna::solvers::rgd_step(&x, &p, eta, &mut geom).unwrap();
        pts.push(x.clone());
    }
    let out = extrapolate(&pts, &RiemnaConfig::default(), &mut geom).unwrap();
    assert!(p.objective(&out).is_finite());
}

#[test]
fn rgd_converges_in_single_precision_at_loose_tolerance() {
    let p = gen::leading_eigenvector::<f32>(20, 50.0, 205);
    let mut rng = ChaCha8Rng::seed_from_u64(206);
    let x0 = manifold::random_point(p.manifold(), &mut rng);
    let cfg = SolverConfig::new(1.0f32 / p.lipschitz().unwrap())
        .with_grad_tol(1e-3)
        .with_max_iters(5_000);
    let run = rgd_run(&x0, &p, &cfg).unwrap();
    assert!(run.trace.converged);
}
