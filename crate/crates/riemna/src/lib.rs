//! Riemannian optimization with extrapolation-based acceleration on matrix
//! manifolds.
//!
//! The crate provides:
//!
//! - [`linalg`]: dense small-matrix kernels (symmetric eigendecomposition,
//!   positive-diagonal QR, spectral matrix functions, LU solves);
//! - [`manifold`]: sphere, SPD, Stiefel and Grassmann geometries behind one
//!   interface with exact (exp/log/parallel transport) and retraction modes;
//! - [`solvers`]: Riemannian gradient descent and Nesterov-style baselines
//!   (RAGD, RNAG-C, RNAG-SC), instrumented with geometry-call counters;
//! - [`accel`]: RiemNA — nonlinear (extrapolation) acceleration of iterate
//!   sequences on manifolds: anchored residuals with an incrementally updated
//!   Gram matrix, the regularized coefficient solve, three weighted averaging
//!   schemes, the restarted RGD+RiemNA driver, adaptive regularization, and
//!   an online variant;
//! - [`problems`]: the four benchmark objectives (leading eigenvector, SPD
//!   Fréchet mean, orthogonal Procrustes, nonlinear eigenspace) with seeded
//!   generators.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below pin the common case.

pub mod accel;
pub mod error;
pub mod linalg;
pub mod manifold;
pub mod problems;
pub mod scalar;
pub mod solvers;

pub use error::{Error, Result};
pub use scalar::Real;

/// f64 dense matrix.
pub type Matrix64 = linalg::DenseMatrix<f64>;
/// f32 dense matrix.
pub type Matrix32 = linalg::DenseMatrix<f32>;
/// f64 manifold point.
pub type Point64 = manifold::ManifoldPoint<f64>;
/// f64 tangent vector.
pub type Tangent64 = manifold::TangentVec<f64>;
/// f64 problem instance.
pub type Problem64 = problems::Problem<f64>;
