//! Dense linear solves: LU with partial pivoting and the small structured
//! system behind the Stiefel inverse retraction.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::DenseMatrix;

/// Solve A X = B by LU with partial pivoting. A must be square.
pub fn lu_solve<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    a.check_square("lu_solve")?;
    let n = a.rows();
    if b.rows() != n {
        return Err(Error::shape(format!(
            "lu_solve: rhs has {} rows, expected {n}",
            b.rows()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let nrhs = b.cols();

    let pivot_tol = a.norm_max() * T::epsilon() * T::of(n as f64);

    for k in 0..n {
        // partial pivot
        let mut p = k;
        let mut best = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= pivot_tol {
            return Err(Error::Solve(format!(
                "lu_solve: matrix numerically singular at pivot {k}"
            )));
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            for j in 0..nrhs {
                let tmp = x[(k, j)];
                x[(k, j)] = x[(p, j)];
                x[(p, j)] = tmp;
            }
        }
        let piv = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / piv;
            if f == T::zero() {
                continue;
            }
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                lu[(i, j)] = lu[(i, j)] - f * lu[(k, j)];
            }
            for j in 0..nrhs {
                x[(i, j)] = x[(i, j)] - f * x[(k, j)];
            }
        }
    }

    // back substitution
    for j in 0..nrhs {
        for i in (0..n).rev() {
            let mut s = x[(i, j)];
            for k in (i + 1)..n {
                s -= lu[(i, k)] * x[(k, j)];
            }
            x[(i, j)] = s / lu[(i, i)];
        }
    }
    Ok(x)
}

/// Inverse via [`lu_solve`] against the identity.
pub fn inverse<T: Real>(a: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    lu_solve(a, &DenseMatrix::identity(a.rows()))
}

/// Solve M·S + Sᵀ·Mᵀ = 2I for upper-triangular S with positive diagonal.
///
/// This is the small system behind the QR-based inverse retraction on the
/// Stiefel manifold (M = XᵀY, r×r). The r(r+1)/2 upper-triangular unknowns are
/// vectorized and solved densely; r stays tiny in practice so a direct solve
/// beats any specialized recurrence.
pub fn solve_stiefel_inverse_system<T: Real>(m: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    m.check_square("solve_stiefel_inverse_system")?;
    let r = m.rows();
    let unknowns = r * (r + 1) / 2;

    // index of upper-triangular entry (k, l), k <= l
    let idx = |k: usize, l: usize| -> usize { k * (2 * r + 1 - k) / 2 + (l - k) };

    let mut sys = DenseMatrix::zeros(unknowns, unknowns);
    let mut rhs = DenseMatrix::zeros(unknowns, 1);

    // equations indexed by (i, j), i <= j: (M S)_{ij} + (M S)_{ji} = 2 δ_{ij}
    let mut row = 0;
    for i in 0..r {
        for j in i..r {
            for k in 0..r {
                for l in k..r {
                    let col = idx(k, l);
                    let mut coeff = T::zero();
                    if l == j {
                        coeff += m[(i, k)];
                    }
                    if l == i {
                        coeff += m[(j, k)];
                    }
                    sys[(row, col)] += coeff;
                }
            }
            rhs[(row, 0)] = if i == j { T::of(2.0) } else { T::zero() };
            row += 1;
        }
    }

    let sol = lu_solve(&sys, &rhs)
        .map_err(|_| Error::geometry("inverse retraction system singular: points too far apart"))?;

    let mut s = DenseMatrix::zeros(r, r);
    for k in 0..r {
        for l in k..r {
            s[(k, l)] = sol[(idx(k, l), 0)];
        }
    }
    for k in 0..r {
        if s[(k, k)] <= T::zero() {
            return Err(Error::geometry(
                "inverse retraction undefined: triangular factor lost positive diagonal",
            ));
        }
    }
    Ok(s)
}
