//! Thin Householder QR with the positive-diagonal uniqueness convention.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::DenseMatrix;

/// Thin QR factorization M = Q·R with Q column-orthonormal (rows×cols) and R
/// upper-triangular (cols×cols) with strictly positive diagonal. The sign
/// convention makes the factorization unique, which the Stiefel/Grassmann
/// inverse retraction relies on.
pub fn qr_positive<T: Real>(m: &DenseMatrix<T>) -> Result<(DenseMatrix<T>, DenseMatrix<T>)> {
    let (rows, cols) = m.shape();
    if cols > rows {
        return Err(Error::shape(format!(
            "qr_positive: need cols <= rows, got {rows}x{cols}"
        )));
    }
    if cols == 0 {
        return Err(Error::shape("qr_positive: empty matrix"));
    }

    let norm = m.norm_fro();
    let rank_tol = T::of(1e-12) * norm;

    let mut r = m.clone();
    // Householder vectors, stored column by column.
    let mut hh: Vec<Vec<T>> = Vec::with_capacity(cols);

    for k in 0..cols {
        let mut alpha = T::zero();
        for i in k..rows {
            alpha += r[(i, k)] * r[(i, k)];
        }
        let alpha = alpha.sqrt();
        let mut v = vec![T::zero(); rows];
        let beta = if r[(k, k)] >= T::zero() {
            -alpha
        } else {
            alpha
        };
        if alpha > T::zero() {
            v[k] = r[(k, k)] - beta;
            for i in (k + 1)..rows {
                v[i] = r[(i, k)];
            }
            let vnorm2: T = v[k..].iter().map(|&x| x * x).sum();
            if vnorm2 > T::zero() {
                // apply I - 2vvᵀ/vᵀv to the remaining columns
                for j in k..cols {
                    let mut dot = T::zero();
                    for i in k..rows {
                        dot += v[i] * r[(i, j)];
                    }
                    let f = T::of(2.0) * dot / vnorm2;
                    for i in k..rows {
                        r[(i, j)] -= f * v[i];
                    }
                }
            }
        }
        hh.push(v);
    }

    for k in 0..cols {
        if r[(k, k)].abs() < rank_tol {
            return Err(Error::Rank(format!(
                "qr_positive: column {k} numerically dependent (|R[{k},{k}]| = {:e} < 1e-12 * |M|)",
                r[(k, k)].abs().as_f64()
            )));
        }
    }

    // assemble thin Q by applying the reflectors to the first `cols` columns
    // of the identity, in reverse order
    let mut q = DenseMatrix::zeros(rows, cols);
    for j in 0..cols {
        q[(j, j)] = T::one();
    }
    for k in (0..cols).rev() {
        let v = &hh[k];
        let vnorm2: T = v[k..].iter().map(|&x| x * x).sum();
        if vnorm2 == T::zero() {
            continue;
        }
        for j in 0..cols {
            let mut dot = T::zero();
            for i in k..rows {
                dot += v[i] * q[(i, j)];
            }
            let f = T::of(2.0) * dot / vnorm2;
            for i in k..rows {
                q[(i, j)] -= f * v[i];
            }
        }
    }

    // positive-diagonal convention: flip signs column/row-wise
    let mut rtri = DenseMatrix::zeros(cols, cols);
    for i in 0..cols {
        for j in i..cols {
            rtri[(i, j)] = r[(i, j)];
        }
    }
    for k in 0..cols {
        if rtri[(k, k)] < T::zero() {
            for j in k..cols {
                rtri[(k, j)] = -rtri[(k, j)];
            }
            for i in 0..rows {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }

    Ok((q, rtri))
}

/// The Q-factor of [`qr_positive`]; the `qf(·)` map used by QR retractions.
pub fn qf<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    qr_positive(m).map(|(q, _)| q)
}
