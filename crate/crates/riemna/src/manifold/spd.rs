//! Symmetric positive definite matrices with the affine-invariant metric
//! ⟨U, V⟩_X = tr(X⁻¹U X⁻¹V).
//!
//! Exp_X(U) = X expm(X⁻¹U) and Exp_X⁻¹(Y) = X logm(X⁻¹Y), evaluated in the
//! congruence-symmetric form X^{1/2} f(X^{-1/2} · X^{-1/2}) X^{1/2} so that
//! every spectral kernel sees a symmetric argument. Parallel transport is
//! Γ_X^Y U = E U Eᵀ with E = (Y X⁻¹)^{1/2}, likewise built from symmetric
//! square roots.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, DenseMatrix};
use crate::scalar::Real;

use super::gaussian_like;

pub(super) fn check_point<T: Real>(x: &DenseMatrix<T>) -> Result<()> {
    let eig = sym_eig(x)?;
    if eig.values[0] <= T::zero() {
        return Err(Error::Domain {
            what: "spd point is not positive definite".into(),
            min_eigenvalue: eig.values[0].as_f64(),
        });
    }
    Ok(())
}

pub(super) fn check_tangent<T: Real>(u: &DenseMatrix<T>) -> Result<()> {
    if u.asymmetry() > T::invariant_tol(1e-9) {
        return Err(Error::geometry("spd tangent vector must be symmetric"));
    }
    Ok(())
}

/// Symmetric square root and its inverse from one eigendecomposition.
fn whitening<T: Real>(x: &DenseMatrix<T>) -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
    let eig = sym_eig(x)?;
    if eig.values[0] <= T::zero() {
        return Err(Error::Domain {
            what: "spd operation on a non-positive-definite matrix".into(),
            min_eigenvalue: eig.values[0].as_f64(),
        });
    }
    let s = eig.recompose(|w| w.sqrt());
    let p = eig.recompose(|w| w.sqrt().recip());
    Ok((s, p))
}

fn spectral<T: Real>(
    m: &DenseMatrix<T>,
    ctx: &str,
    positive: bool,
    f: impl FnMut(T) -> T,
) -> Result<DenseMatrix<T>> {
    let eig = sym_eig(&m.sym_part())?;
    if positive && eig.values[0] <= T::zero() {
        return Err(Error::Domain {
            what: format!("{ctx}: argument not positive definite"),
            min_eigenvalue: eig.values[0].as_f64(),
        });
    }
    Ok(eig.recompose(f))
}

pub(super) fn inner<T: Real>(
    x: &DenseMatrix<T>,
    u: &DenseMatrix<T>,
    v: &DenseMatrix<T>,
) -> Result<T> {
    let eig = sym_eig(x)?;
    if eig.values[0] <= T::zero() {
        return Err(Error::Domain {
            what: "inner: base point not positive definite".into(),
            min_eigenvalue: eig.values[0].as_f64(),
        });
    }
    let xinv = eig.recompose(|w| w.recip());
    let a = &xinv * u;
    let b = &xinv * v;
    // tr(a · b)
    let n = a.rows();
    let mut tr = T::zero();
    for i in 0..n {
        for j in 0..n {
            tr += a[(i, j)] * b[(j, i)];
        }
    }
    Ok(tr)
}

pub(super) fn exp<T: Real>(x: &DenseMatrix<T>, u: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let (s, p) = whitening(x)?;
    let w = (&(&p * u) * &p).sym_part();
    let e = spectral(&w, "spd exp", false, |t| t.exp())?;
    Ok((&(&s * &e) * &s).sym_part())
}

pub(super) fn log<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let (s, p) = whitening(x)?;
    let w = (&(&p * y) * &p).sym_part();
    let l = spectral(&w, "spd log", true, |t| t.ln())?;
    Ok((&(&s * &l) * &s).sym_part())
}

pub(super) fn dist<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<T> {
    let (_, p) = whitening(x)?;
    let w = (&(&p * y) * &p).sym_part();
    let l = spectral(&w, "spd dist", true, |t| t.ln())?;
    Ok(l.norm_fro())
}

/// Parallel transport Γ_X^Y U = E U Eᵀ, E = X^{1/2}(X^{-1/2} Y X^{-1/2})^{1/2}X^{-1/2}.
pub(super) fn transport<T: Real>(
    x: &DenseMatrix<T>,
    y: &DenseMatrix<T>,
    u: &DenseMatrix<T>,
) -> Result<DenseMatrix<T>> {
    let (s, p) = whitening(x)?;
    let w = (&(&p * y) * &p).sym_part();
    let wsqrt = spectral(&w, "spd transport", true, |t| t.sqrt())?;
    let e = &(&s * &wsqrt) * &p;
    Ok((&(&e * u) * &e.transpose()).sym_part())
}

/// Metric conversion: grad f(X) = X {∇f(X)}_S X.
pub(super) fn egrad_to_rgrad<T: Real>(x: &DenseMatrix<T>, g: &DenseMatrix<T>) -> DenseMatrix<T> {
    (&(x * &g.sym_part()) * x).sym_part()
}

pub(super) fn random_point<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix<T> {
    let q = crate::linalg::qf(&gaussian_like(&DenseMatrix::<T>::zeros(dim, dim), rng))
        .expect("random Gaussian matrix is full rank");
    let evals: Vec<T> = (0..dim)
        .map(|_| T::of(rng.random_range(0.5..2.0)))
        .collect();
    (&(&q * &DenseMatrix::diag(&evals)) * &q.transpose()).sym_part()
}

#[cfg(test)]
mod tests {
    use crate::manifold::{self, Manifold, ManifoldPoint, TangentVec};

    use super::*;

    fn point(d: usize, m: DenseMatrix<f64>) -> ManifoldPoint<f64> {
        ManifoldPoint::new(Manifold::Spd { dim: d }, m).unwrap()
    }

    #[test]
    fn inner_at_identity_is_trace_product() {
        let x = point(2, DenseMatrix::identity(2));
        let u = TangentVec::new(
            x.clone(),
            DenseMatrix::from_vec(2, 2, vec![1.0, 0.5, 0.5, 2.0]),
        )
        .unwrap();
        let v = TangentVec::new(
            x.clone(),
            DenseMatrix::from_vec(2, 2, vec![0.0, 1.0, 1.0, 3.0]),
        )
        .unwrap();
        let got = manifold::inner(&u, &v).unwrap();
        // tr(UV)
        let uv = u.value() * v.value();
        assert!((got - uv.trace()).abs() <= 1e-12);
    }

    #[test]
    fn inner_with_scaled_metric() {
        // X = diag(2,2), U = V = I: tr(X⁻¹ X⁻¹) = 1/2
        let x = point(2, DenseMatrix::diag(&[2.0, 2.0]));
        let u = TangentVec::new(x.clone(), DenseMatrix::identity(2)).unwrap();
        assert!((manifold::inner(&u, &u).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn exp_at_identity_is_matrix_exponential() {
        let x = point(2, DenseMatrix::identity(2));
        let uv = DenseMatrix::from_vec(2, 2, vec![0.1, 0.2, 0.2, -0.3]);
        let u = TangentVec::new(x.clone(), uv.clone()).unwrap();
        let y = manifold::exp(&x, &u).unwrap();
        let expected = crate::linalg::expm_sym(&uv).unwrap();
        assert!((y.value() - &expected).norm_max() <= 1e-12);
    }

    #[test]
    fn exp_of_zero_is_identity_map() {
        let x = point(3, DenseMatrix::diag(&[1.0, 2.0, 5.0]));
        let y = manifold::exp(&x, &TangentVec::zero(x.clone())).unwrap();
        assert!(y.same_point(&x, 1e-12));
    }

    #[test]
    fn log_of_diagonal_exponential() {
        // log(I, diag(e, e)) = I
        let e1 = std::f64::consts::E;
        let x = point(2, DenseMatrix::identity(2));
        let y = point(2, DenseMatrix::diag(&[e1, e1]));
        let u = manifold::log(&x, &y).unwrap();
        assert!((u.value() - &DenseMatrix::identity(2)).norm_max() <= 1e-12);
    }

    #[test]
    fn dist_of_diagonal_case() {
        // dist(I, diag(e², 1, 1)) = ‖logm‖_F = 2
        let e2 = std::f64::consts::E.powi(2);
        let x = point(3, DenseMatrix::identity(3));
        let y = point(3, DenseMatrix::diag(&[e2, 1.0, 1.0]));
        assert!((manifold::dist(&x, &y).unwrap() - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn transport_to_same_point_is_identity() {
        let x = point(2, DenseMatrix::diag(&[2.0, 0.5]));
        let u = TangentVec::new(
            x.clone(),
            DenseMatrix::from_vec(2, 2, vec![0.3, 0.1, 0.1, -0.2]),
        )
        .unwrap();
        let t = manifold::transport(&u, &x).unwrap();
        assert!((t.value() - u.value()).norm_max() <= 1e-12);
    }

    #[test]
    fn transport_is_isometric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        use rand::SeedableRng;
        for _ in 0..10 {
            let man = Manifold::Spd { dim: 4 };
            let x = manifold::random_point::<f64, _>(man, &mut rng);
            let y = manifold::random_point::<f64, _>(man, &mut rng);
            let u = manifold::random_tangent(&x, &mut rng, 0.7);
            let v = manifold::random_tangent(&x, &mut rng, 1.3);
            let tu = manifold::transport(&u, &y).unwrap();
            let tv = manifold::transport(&v, &y).unwrap();
            let before = manifold::inner(&u, &v).unwrap();
            let after = manifold::inner(&tu, &tv).unwrap();
            assert!((before - after).abs() <= 1e-9 * before.abs().max(1.0));
        }
    }

    #[test]
    fn rgrad_satisfies_defining_identity() {
        // ⟨X {g}_S X, u⟩_X = tr(gᵀ u) for symmetric u
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        use rand::SeedableRng;
        let man = Manifold::Spd { dim: 3 };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let g = gaussian_like(x.value(), &mut rng).sym_part();
        let rg = manifold::egrad_to_rgrad(&x, &g).unwrap();
        for _ in 0..5 {
            let u = manifold::random_tangent(&x, &mut rng, 1.0);
            let lhs = manifold::inner(&rg, &u).unwrap();
            let rhs = g.dot(u.value());
            assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
        }
    }
}
