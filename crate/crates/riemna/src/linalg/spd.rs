//! Spectral matrix functions on symmetric (positive definite) matrices.
//!
//! All functions are defined through [`sym_eig`]: f(M) = V f(diag) Vᵀ. This
//! keeps round trips like expm(logm(M)) = M exact to the quality of the
//! eigensolver, which is what the SPD manifold operations need.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::eig::sym_eig;
use super::DenseMatrix;

fn spectral_map<T: Real>(
    m: &DenseMatrix<T>,
    ctx: &str,
    require_positive: bool,
    f: impl FnMut(T) -> T,
) -> Result<DenseMatrix<T>> {
    let eig = sym_eig(m)?;
    if require_positive {
        let min = eig.values[0];
        if min <= T::zero() {
            return Err(Error::Domain {
                what: format!("{ctx}: matrix is not positive definite"),
                min_eigenvalue: min.as_f64(),
            });
        }
    }
    Ok(eig.recompose(f))
}

/// Principal square root of an SPD matrix.
pub fn sqrtm<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    spectral_map(m, "sqrtm", true, |w| w.sqrt())
}

/// Inverse principal square root of an SPD matrix.
pub fn sqrtm_inv<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    spectral_map(m, "sqrtm_inv", true, |w| w.sqrt().recip())
}

/// Matrix logarithm of an SPD matrix.
pub fn logm<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    spectral_map(m, "logm", true, |w| w.ln())
}

/// Matrix exponential of a symmetric matrix.
pub fn expm_sym<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    spectral_map(m, "expm_sym", false, |w| w.exp())
}

/// Inverse of an SPD matrix.
pub fn inv_spd<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    spectral_map(m, "inv_spd", true, |w| w.recip())
}

/// Check symmetry and strict positive definiteness.
pub fn check_spd<T: Real>(m: &DenseMatrix<T>, ctx: &str) -> Result<()> {
    let eig = sym_eig(m)?;
    if eig.values[0] <= T::zero() {
        return Err(Error::Domain {
            what: format!("{ctx}: matrix is not positive definite"),
            min_eigenvalue: eig.values[0].as_f64(),
        });
    }
    Ok(())
}
