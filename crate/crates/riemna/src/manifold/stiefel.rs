//! Stiefel manifold St(p, r) = { X ∈ R^{p×r} : XᵀX = I } with the embedded
//! Euclidean metric.
//!
//! Retraction is QR-based: Retr_X(U) = qf(X + U). The inverse retraction
//! solves (XᵀY) S + Sᵀ (YᵀX) = 2I for upper-triangular S with positive
//! diagonal and returns Y S − X. Vector transport projects onto the
//! destination tangent space: U − Y {YᵀU}_S.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{qf, solve_stiefel_inverse_system, DenseMatrix};
use crate::scalar::Real;

use super::gaussian_like;

pub(super) fn check_point<T: Real>(x: &DenseMatrix<T>) -> Result<()> {
    let gram = &x.transpose() * x;
    let dev = (&gram - &DenseMatrix::identity(x.cols())).norm_max();
    if dev > T::invariant_tol(1e-10) {
        return Err(Error::geometry(format!(
            "orthonormality violated: |XᵀX - I| = {:e}",
            dev.as_f64()
        )));
    }
    Ok(())
}

pub(super) fn check_tangent<T: Real>(x: &DenseMatrix<T>, u: &DenseMatrix<T>) -> Result<()> {
    let xtu = &x.transpose() * u;
    let skew_dev = (&xtu + &xtu.transpose()).norm_max();
    let scale = u.norm_fro().max(T::one());
    if skew_dev > T::invariant_tol(1e-9) * scale {
        return Err(Error::geometry(format!(
            "stiefel tangent violates XᵀU + UᵀX = 0 (deviation {:e})",
            skew_dev.as_f64()
        )));
    }
    Ok(())
}

/// Tangent projection g − X {Xᵀg}_S.
pub(super) fn project<T: Real>(x: &DenseMatrix<T>, g: &DenseMatrix<T>) -> DenseMatrix<T> {
    let sym = (&x.transpose() * g).sym_part();
    g - &(x * &sym)
}

pub(super) fn retract<T: Real>(x: &DenseMatrix<T>, u: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    qf(&(x + u))
}

pub(super) fn inv_retract<T: Real>(
    x: &DenseMatrix<T>,
    y: &DenseMatrix<T>,
) -> Result<DenseMatrix<T>> {
    let m = &x.transpose() * y;
    let s = solve_stiefel_inverse_system(&m)?;
    Ok(&(y * &s) - x)
}

/// Vector transport by orthogonal projection at the destination.
pub(super) fn transport<T: Real>(u: &DenseMatrix<T>, y: &DenseMatrix<T>) -> DenseMatrix<T> {
    project(y, u)
}

pub(super) fn random_point<T: Real, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> DenseMatrix<T> {
    qf(&gaussian_like(&DenseMatrix::<T>::zeros(rows, cols), rng))
        .expect("random Gaussian matrix is full rank")
}
