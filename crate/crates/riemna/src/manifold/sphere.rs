//! Unit sphere S^{d-1} ⊂ R^d.
//!
//! Tangent space at x: { u : xᵀu = 0 } with the Euclidean inner product.
//! Exp_x(u) = cos(‖u‖) x + sin(‖u‖) u/‖u‖, Exp_x⁻¹(y) = θ w/‖w‖ with
//! θ = arccos(xᵀy) and w the tangent projection of y − x. Vector transport is
//! the orthogonal projection onto the destination tangent space.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

use super::gaussian_like;

pub(super) fn check_point<T: Real>(x: &DenseMatrix<T>) -> Result<()> {
    let n = x.norm_fro();
    if (n - T::one()).abs() > T::invariant_tol(1e-10) {
        return Err(Error::geometry(format!(
            "sphere point has norm {} (expected 1)",
            n.as_f64()
        )));
    }
    Ok(())
}

pub(super) fn check_tangent<T: Real>(x: &DenseMatrix<T>, u: &DenseMatrix<T>) -> Result<()> {
    let align = x.dot(u).abs();
    let scale = u.norm_fro().max(T::one());
    if align > T::invariant_tol(1e-10) * scale {
        return Err(Error::geometry(format!(
            "sphere tangent violates x.u = 0 (x.u = {:e})",
            align.as_f64()
        )));
    }
    Ok(())
}

/// Tangent projection g − (xᵀg)x.
pub(super) fn project<T: Real>(x: &DenseMatrix<T>, g: &DenseMatrix<T>) -> DenseMatrix<T> {
    g.axpy(-x.dot(g), x)
}

fn normalize<T: Real>(v: &DenseMatrix<T>) -> DenseMatrix<T> {
    v.scale(v.norm_fro().recip())
}

pub(super) fn exp<T: Real>(x: &DenseMatrix<T>, u: &DenseMatrix<T>) -> DenseMatrix<T> {
    let theta = u.norm_fro();
    if theta < T::epsilon() {
        return normalize(&(x + u));
    }
    let y = x.scale(theta.cos()).axpy(theta.sin() / theta, u);
    normalize(&y)
}

pub(super) fn log<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    let c = x.dot(y).min(T::one()).max(-T::one());
    if c <= -T::one() + T::of(1e-10) {
        return Err(Error::geometry("sphere log undefined at antipodal points"));
    }
    // tangent projection of y − x; its norm is sin(theta). The angle comes
    // from atan2 rather than arccos, whose noise floor near 1 is ~sqrt(eps).
    let w = project(x, &(y - x));
    let s = w.norm_fro();
    let theta = s.atan2(c);
    if theta < T::of(1e-12) {
        // series limit: theta/sin(theta) -> 1
        return Ok(w);
    }
    Ok(w.scale(theta / s))
}

pub(super) fn dist<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<T> {
    let c = x.dot(y).min(T::one()).max(-T::one());
    let s = project(x, &(y - x)).norm_fro();
    Ok(s.atan2(c))
}

/// Projection-type vector transport: u ↦ u − (yᵀu)y.
pub(super) fn transport<T: Real>(u: &DenseMatrix<T>, y: &DenseMatrix<T>) -> DenseMatrix<T> {
    project(y, u)
}

pub(super) fn random_point<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DenseMatrix<T> {
    let g = gaussian_like(&DenseMatrix::<T>::zeros(dim, 1), rng);
    normalize(&g)
}
