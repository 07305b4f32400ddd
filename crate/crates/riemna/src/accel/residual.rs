//! Anchored residual buffer with an incrementally maintained Gram matrix.
//!
//! All residuals live in one tangent space (the anchor's). When the anchor
//! advances, existing residuals are transported and — transport being
//! isometric (exactly for parallel transport, to first order for the
//! projection transports) — the existing Gram block is reused unchanged; only
//! the new row and column are computed. A sliding window of at most
//! `capacity` residuals is kept.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::manifold::{self, Geom, ManifoldPoint, TangentVec};
use crate::scalar::Real;

#[derive(Debug, Clone)]
pub struct ResidualBuffer<T> {
    anchor: ManifoldPoint<T>,
    residuals: Vec<TangentVec<T>>,
    gram: DenseMatrix<T>,
    capacity: usize,
}

impl<T: Real> ResidualBuffer<T> {
    pub fn new(anchor: ManifoldPoint<T>, capacity: usize) -> Self {
        Self {
            anchor,
            residuals: Vec::new(),
            gram: DenseMatrix::zeros(0, 0),
            capacity,
        }
    }

    /// Residuals of an iterate sequence x_0..x_{k+1}: r_i carries the step
    /// from x_i to x_{i+1}, transported to the anchor x_k (the second-to-last
    /// iterate, the last point with a known next step).
    pub fn from_iterates(points: &[ManifoldPoint<T>], geom: &mut Geom) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::usage("residuals need at least two iterates"));
        }
        let n = points.len();
        let anchor = points[n - 2].clone();
        let mut residuals = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let step = geom.inv_step(&points[i], &points[i + 1]).map_err(|e| {
                Error::geometry(format!("residual between iterates {i} and {}: {e}", i + 1))
            })?;
            let at_anchor = if i == n - 2 {
                step
            } else {
                geom.carry(&step, &anchor)?
            };
            residuals.push(at_anchor);
        }
        Self::assemble(anchor, residuals)
    }

    /// Gradient-shortcut residuals for an RGD window: with x_{i+1} produced by
    /// a step of size η along grad f(x_i), the residual is
    /// r_i = −η 𝒯_{x_i}^{anchor} grad f(x_i), no inverse map needed. The
    /// anchor is the last point of the window.
    pub fn from_gradient_steps(
        points: &[ManifoldPoint<T>],
        grads: &[TangentVec<T>],
        eta: T,
        geom: &mut Geom,
    ) -> Result<Self> {
        if points.is_empty() || points.len() != grads.len() {
            return Err(Error::usage(
                "gradient-shortcut residuals need one gradient per point",
            ));
        }
        let n = points.len();
        let anchor = points[n - 1].clone();
        let mut residuals = Vec::with_capacity(n);
        for (i, g) in grads.iter().enumerate() {
            let scaled = g.scale(-eta);
            let at_anchor = if i == n - 1 {
                scaled
            } else {
                geom.carry(&scaled, &anchor)?
            };
            residuals.push(at_anchor);
        }
        Self::assemble(anchor, residuals)
    }

    fn assemble(anchor: ManifoldPoint<T>, residuals: Vec<TangentVec<T>>) -> Result<Self> {
        let n = residuals.len();
        let mut gram = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = manifold::inner(&residuals[i], &residuals[j])?;
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        Ok(Self {
            anchor,
            residuals,
            gram,
            capacity: n,
        })
    }

    /// Append a residual based at a (possibly new) anchor. Existing residuals
    /// are transported to the new anchor, the Gram block is kept, and only
    /// the new row/column is computed. Exceeding the capacity evicts the
    /// oldest entry.
    pub fn append(&mut self, r_new: TangentVec<T>, geom: &mut Geom) -> Result<()> {
        let new_anchor = r_new.base().clone();
        let moved = !self.anchor.same_point(&new_anchor, T::of(1e-14));
        if moved {
            for r in &mut self.residuals {
                *r = geom.carry(r, &new_anchor)?;
            }
            self.anchor = new_anchor;
        }

        let n = self.residuals.len();
        let mut grown = DenseMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                grown[(i, j)] = self.gram[(i, j)];
            }
        }
        for (i, r) in self.residuals.iter().enumerate() {
            let v = manifold::inner(r, &r_new)?;
            grown[(i, n)] = v;
            grown[(n, i)] = v;
        }
        grown[(n, n)] = manifold::inner(&r_new, &r_new)?;
        self.residuals.push(r_new);
        self.gram = grown;

        while self.residuals.len() > self.capacity {
            self.residuals.remove(0);
            let m = self.gram.rows();
            self.gram = DenseMatrix::from_fn(m - 1, m - 1, |i, j| self.gram[(i + 1, j + 1)]);
        }
        Ok(())
    }

    pub fn anchor(&self) -> &ManifoldPoint<T> {
        &self.anchor
    }

    pub fn residuals(&self) -> &[TangentVec<T>] {
        &self.residuals
    }

    pub fn gram(&self) -> &DenseMatrix<T> {
        &self.gram
    }

    pub fn len(&self) -> usize {
        self.residuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Recompute the Gram matrix from scratch; the incremental update must
    /// agree with this up to transport isometry error.
    pub fn recompute_gram(&self) -> Result<DenseMatrix<T>> {
        let n = self.residuals.len();
        let mut gram = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = manifold::inner(&self.residuals[i], &self.residuals[j])?;
                gram[(i, j)] = v;
                gram[(j, i)] = v;
            }
        }
        Ok(gram)
    }
}
