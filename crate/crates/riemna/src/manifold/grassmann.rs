//! Grassmann manifold Gr(p, r): r-dimensional subspaces of R^p, represented
//! by column-orthonormal matrices. Tangent vectors are horizontal lifts
//! (XᵀU = 0). Retraction is qf(X + U); the inverse retraction is
//! Y (XᵀY)⁻¹ − X. Representatives are non-unique, so subspace equality is
//! tested through principal angles.

use crate::error::{Error, Result};
use crate::linalg::{lu_solve, sym_eig, DenseMatrix};
use crate::scalar::Real;

use super::GrassmannTransport;

pub(super) fn check_tangent<T: Real>(x: &DenseMatrix<T>, u: &DenseMatrix<T>) -> Result<()> {
    let dev = (&x.transpose() * u).norm_max();
    let scale = u.norm_fro().max(T::one());
    if dev > T::invariant_tol(1e-9) * scale {
        return Err(Error::geometry(format!(
            "grassmann tangent violates XᵀU = 0 (deviation {:e})",
            dev.as_f64()
        )));
    }
    Ok(())
}

/// Horizontal projection g − X Xᵀ g.
pub(super) fn project<T: Real>(x: &DenseMatrix<T>, g: &DenseMatrix<T>) -> DenseMatrix<T> {
    g - &(x * &(&x.transpose() * g))
}

pub(super) fn inv_retract<T: Real>(
    x: &DenseMatrix<T>,
    y: &DenseMatrix<T>,
) -> Result<DenseMatrix<T>> {
    // Y (XᵀY)⁻¹ − X, via a solve on the transposed system
    let m = &x.transpose() * y;
    let z = lu_solve(&m.transpose(), &y.transpose())
        .map_err(|_| Error::geometry("inverse retraction undefined: XᵀY singular"))?;
    Ok(&z.transpose() - x)
}

/// Vector transport; destination projection U − YYᵀU by default, with the
/// source-projection variant U − XXᵀU selectable.
pub(super) fn transport<T: Real>(
    x: &DenseMatrix<T>,
    u: &DenseMatrix<T>,
    y: &DenseMatrix<T>,
    variant: GrassmannTransport,
) -> DenseMatrix<T> {
    match variant {
        GrassmannTransport::DestinationProjection => project(y, u),
        GrassmannTransport::SourceProjection => project(x, u),
    }
}

/// Largest principal-angle gap: max_i (1 − cos θ_i) where cos θ_i are the
/// singular values of XᵀY. Zero iff the subspaces coincide.
pub(super) fn subspace_gap<T: Real>(x: &DenseMatrix<T>, y: &DenseMatrix<T>) -> Result<T> {
    let m = &x.transpose() * y;
    let gram = (&m.transpose() * &m).sym_part();
    let eig = sym_eig(&gram)?;
    let min_sv = eig.values[0].max(T::zero()).sqrt();
    Ok(T::one() - min_sv)
}
