//! Weighted averaging of points on a manifold, three ways.
//!
//! Given weights c summing to one and points x_0..x_k:
//!
//! - recursive: x̃_i = Exp_{x̃_{i−1}}((c_i/Σ_{j≤i}c_j) Exp⁻¹_{x̃_{i−1}}(x_i)),
//!   x̃_{−1} = x_0 — a streaming geodesic average;
//! - tangent-at-last: one exponential at x_k along
//!   −Σ_{i<k} θ_i Γ_{x_i}^{x_k} Exp⁻¹_{x_i}(x_{i+1}), θ_i = Σ_{j≤i} c_j;
//! - Fréchet: argmin_x Σ c_i d²(x, x_i), solved by gradient descent on the
//!   weighted objective, warm-started at the recursive average.
//!
//! In flat geometry all three reduce to Σ c_i x_i. Weights may be negative;
//! the recursive scheme then only needs its running partial sums to stay away
//! from zero.

use crate::error::{Error, Result};
use crate::manifold::{self, Geom, ManifoldPoint, TangentVec};
use crate::scalar::Real;

use super::residual::ResidualBuffer;

fn check_weights<T: Real>(c: &[T], points_len: usize) -> Result<()> {
    if c.len() != points_len || c.is_empty() {
        return Err(Error::usage(format!(
            "averaging needs one weight per point (got {} weights, {} points)",
            c.len(),
            points_len
        )));
    }
    let sum: T = c.iter().copied().sum();
    if (sum - T::one()).abs() > T::invariant_tol(1e-6) {
        return Err(Error::usage(format!(
            "weights must sum to 1 (got {})",
            sum.as_f64()
        )));
    }
    Ok(())
}

/// Streaming geodesic average (recursion above). Errors when a running
/// partial sum vanishes, which would make a recursion weight undefined.
pub fn average_recursive<T: Real>(
    c: &[T],
    points: &[ManifoldPoint<T>],
    geom: &mut Geom,
) -> Result<ManifoldPoint<T>> {
    check_weights(c, points.len())?;
    let mut partial = T::zero();
    for (i, &ci) in c.iter().enumerate() {
        partial += ci;
        if partial.abs() < T::of(1e-12) {
            return Err(Error::Averaging {
                what: format!("vanishing partial weight sum through index {i}"),
                residual: partial.as_f64(),
            });
        }
    }

    // x̃_0 = x_0 regardless of c_0; start the geodesic recursion at i = 1
    let mut acc = points[0].clone();
    let mut partial = c[0];
    for i in 1..points.len() {
        partial += c[i];
        let toward = geom.inv_step(&acc, &points[i])?;
        acc = geom.step(&acc, &toward.scale(c[i] / partial))?;
    }
    Ok(acc)
}

/// Tangent-space average: all steps are transported into the last point's
/// tangent space and one exponential is taken there.
pub fn average_tangent<T: Real>(
    c: &[T],
    points: &[ManifoldPoint<T>],
    geom: &mut Geom,
) -> Result<ManifoldPoint<T>> {
    check_weights(c, points.len())?;
    let last = points.len() - 1;
    let anchor = &points[last];
    let mut direction = TangentVec::zero(anchor.clone());
    let mut theta = T::zero();
    for i in 0..last {
        theta += c[i];
        let step = geom.inv_step(&points[i], &points[i + 1])?;
        let carried = geom.carry(&step, anchor)?;
        direction = direction.axpy(-theta, &carried)?;
    }
    geom.step(anchor, &direction)
}

/// [`average_tangent`] reusing residuals already anchored at the last point
/// of the averaging window (buffer residual i is the step x_i → x_{i+1}).
pub(super) fn average_tangent_from_buffer<T: Real>(
    c: &[T],
    buf: &ResidualBuffer<T>,
    geom: &mut Geom,
) -> Result<ManifoldPoint<T>> {
    let anchor = buf.anchor().clone();
    let mut direction = TangentVec::zero(anchor.clone());
    let mut theta = T::zero();
    for (ci, r) in c.iter().zip(buf.residuals()).take(c.len() - 1) {
        theta += *ci;
        direction = direction.axpy(-theta, r)?;
    }
    geom.step(&anchor, &direction)
}

/// Weighted Fréchet mean: first-order stationary point of
/// D(x) = ½ Σ c_i d²(x, x_i), found by Riemannian gradient descent with
/// stepsize 1/Σ|c_i|, warm-started at the recursive average. The returned
/// point satisfies ‖Σ c_i Exp_x⁻¹(x_i)‖ ≤ inner_tol.
pub fn average_frechet<T: Real>(
    c: &[T],
    points: &[ManifoldPoint<T>],
    geom: &mut Geom,
    inner_tol: T,
    inner_max_iters: usize,
) -> Result<ManifoldPoint<T>> {
    check_weights(c, points.len())?;
    let step = T::one()
        / c.iter()
            .map(|&ci| ci.abs())
            .sum::<T>()
            .max(T::min_positive_value());
    let mut x = average_recursive(c, points, geom)?;

    for _ in 0..=inner_max_iters {
        let mut descent = TangentVec::zero(x.clone());
        for (ci, pi) in c.iter().zip(points) {
            let toward = geom.inv_step(&x, pi)?;
            descent = descent.axpy(*ci, &toward)?;
        }
        let res = manifold::norm(&descent)?;
        if res <= inner_tol {
            return Ok(x);
        }
        x = geom.step(&x, &descent.scale(step))?;
    }

    // one more residual evaluation for the error report
    let mut descent = TangentVec::zero(x.clone());
    for (ci, pi) in c.iter().zip(points) {
        descent = descent.axpy(*ci, &geom.inv_step(&x, pi)?)?;
    }
    Err(Error::Averaging {
        what: format!("Fréchet inner solver stalled after {inner_max_iters} iterations"),
        residual: manifold::norm(&descent)?.as_f64(),
    })
}
