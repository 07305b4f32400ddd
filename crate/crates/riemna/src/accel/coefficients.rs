//! Regularized extrapolation weights.
//!
//! Minimizing ‖Σ c_i r_i‖² + λ‖c‖² over Σ c_i = 1 has the closed form
//! c* = (R + λI)⁻¹1 / (1ᵀ(R + λI)⁻¹1) in terms of the residual Gram matrix
//! R. The solve goes through the symmetric eigendecomposition, which also
//! yields the condition number used to reject hopeless systems.

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, DenseMatrix};
use crate::scalar::Real;

/// Normalized extrapolation weights plus the regularization they were solved
/// with. The weights sum to one; individual entries may be negative.
#[derive(Debug, Clone)]
pub struct Coefficients<T> {
    c: Vec<T>,
    lambda: T,
}

impl<T: Real> Coefficients<T> {
    pub fn weights(&self) -> &[T] {
        &self.c
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    /// Partial sums θ_i = Σ_{j≤i} c_j. The last entry is 1 by construction.
    pub fn partial_sums(&self) -> Vec<T> {
        let mut acc = T::zero();
        self.c
            .iter()
            .map(|&ci| {
                acc += ci;
                acc
            })
            .collect()
    }

    /// cᵀ(R + λI)c, the regularized objective this solve minimizes.
    pub fn penalized_objective(&self, gram: &DenseMatrix<T>) -> T {
        let n = self.c.len();
        let mut quad = T::zero();
        for i in 0..n {
            for j in 0..n {
                quad += self.c[i] * gram[(i, j)] * self.c[j];
            }
        }
        let sq: T = self.c.iter().map(|&x| x * x).sum();
        quad + self.lambda * sq
    }
}

/// Solve for the extrapolation weights given the residual Gram matrix.
///
/// With a single residual the constraint forces c = (1) regardless of λ.
/// The system is rejected when R + λI has a non-positive eigenvalue or a
/// condition number beyond 1e14; both indicate λ is too small for this Gram.
pub fn solve_coefficients<T: Real>(gram: &DenseMatrix<T>, lambda: T) -> Result<Coefficients<T>> {
    gram.check_symmetric("solve_coefficients", 1e-8)?;
    if lambda < T::zero() {
        return Err(Error::usage(
            "solve_coefficients: lambda must be non-negative",
        ));
    }
    let n = gram.rows();
    if n == 1 {
        return Ok(Coefficients {
            c: vec![T::one()],
            lambda,
        });
    }

    let mut reg = gram.sym_part();
    for i in 0..n {
        reg[(i, i)] += lambda;
    }
    let eig = sym_eig(&reg)?;
    let wmin = eig.values[0];
    let wmax = eig.values[n - 1];
    if wmin <= T::zero() || wmax / wmin > T::of(1e14) {
        return Err(Error::Solve(format!(
            "coefficient system too ill-conditioned (min eigenvalue {:e}); increase lambda",
            wmin.as_f64()
        )));
    }

    // y = V diag(1/w) Vᵀ 1
    let v = &eig.vectors;
    let mut y = vec![T::zero(); n];
    for k in 0..n {
        let col_sum: T = (0..n).map(|i| v[(i, k)]).sum();
        let f = col_sum / eig.values[k];
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += v[(i, k)] * f;
        }
    }
    let total: T = y.iter().copied().sum();
    if total.abs() <= T::min_positive_value() {
        return Err(Error::Solve(
            "coefficient normalization degenerate; increase lambda".into(),
        ));
    }
    let c: Vec<T> = y.into_iter().map(|yi| yi / total).collect();
    Ok(Coefficients { c, lambda })
}
