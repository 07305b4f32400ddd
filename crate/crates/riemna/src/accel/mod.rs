//! RiemNA: nonlinear (extrapolation-based) acceleration on manifolds.
//!
//! An extrapolation step takes a window of iterates x_0..x_{k+1}, forms the
//! residuals r_i = Γ_{x_i}^{x_k} Exp⁻¹_{x_i}(x_{i+1}) in the anchor tangent
//! space, solves the regularized least-squares problem for weights c* with
//! Σ c_i = 1, and returns a weighted average of x_0..x_k under one of three
//! schemes. Drivers in this module wrap that step into the restarted
//! RGD+RiemNA loop, an adaptive-regularization variant, and an online
//! iteration.

mod average;
mod coefficients;
mod drivers;
mod residual;

pub use average::{average_frechet, average_recursive, average_tangent};
pub use coefficients::{solve_coefficients, Coefficients};
pub use drivers::{ada_riemna, rgd_riemna_run, riemna_online_run};
pub use residual::ResidualBuffer;

use crate::error::{Error, Result};
use crate::manifold::{Geom, ManifoldPoint};
use crate::scalar::Real;

/// Which weighted average turns the coefficients into a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AveragingScheme {
    /// Streaming geodesic recursion (the default, and the form used by the
    /// restarted driver).
    #[default]
    Recursive,
    /// Single exponential in the last iterate's tangent space.
    TangentAtLast,
    /// Weighted Fréchet mean (inner iterative solve).
    Frechet,
}

/// How the regularization λ relates to the residual Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LambdaScaling {
    /// Regularize with λ·‖R‖ (max-entry norm). Extrapolation quality is then
    /// scale-free: residuals shrink by orders of magnitude as a solver
    /// converges, and a fixed absolute λ would eventually dwarf the Gram and
    /// flatten the weights to uniform, losing all acceleration.
    #[default]
    Relative,
    /// Use λ verbatim on the raw Gram.
    Raw,
}

/// Extrapolation parameters.
#[derive(Debug, Clone)]
pub struct RiemnaConfig<T> {
    /// Coefficient regularization λ; interpreted per `lambda_scaling`.
    pub lambda: T,
    pub lambda_scaling: LambdaScaling,
    /// Memory depth m: window length for the restarted/online drivers.
    pub memory: usize,
    pub scheme: AveragingScheme,
    /// Reject an extrapolated point whose objective exceeds the best iterate
    /// of its epoch. Off by default: the restart loop then follows the plain
    /// algorithm, which is what the convergence statements describe.
    pub safeguard: bool,
    /// Online mixing parameter δ.
    pub delta: T,
    /// Stationarity tolerance of the Fréchet inner solve.
    pub frechet_inner_tol: T,
    pub frechet_max_iters: usize,
}

impl<T: Real> Default for RiemnaConfig<T> {
    fn default() -> Self {
        Self {
            lambda: T::of(1e-8),
            lambda_scaling: LambdaScaling::default(),
            memory: 10,
            scheme: AveragingScheme::Recursive,
            safeguard: false,
            delta: T::one(),
            frechet_inner_tol: T::of(1e-10),
            frechet_max_iters: 200,
        }
    }
}

impl<T: Real> RiemnaConfig<T> {
    pub fn with_lambda(mut self, lambda: T) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_lambda_scaling(mut self, scaling: LambdaScaling) -> Self {
        self.lambda_scaling = scaling;
        self
    }

    /// λ as handed to the coefficient solve for a given Gram matrix.
    pub fn effective_lambda(&self, gram: &crate::linalg::DenseMatrix<T>) -> T {
        match self.lambda_scaling {
            LambdaScaling::Raw => self.lambda,
            LambdaScaling::Relative => {
                let scale = gram.norm_max();
                if scale > T::zero() {
                    self.lambda * scale
                } else {
                    self.lambda
                }
            }
        }
    }

    pub fn with_memory(mut self, m: usize) -> Self {
        self.memory = m;
        self
    }

    pub fn with_scheme(mut self, scheme: AveragingScheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn with_safeguard(mut self, on: bool) -> Self {
        self.safeguard = on;
        self
    }

    pub fn with_delta(mut self, delta: T) -> Self {
        self.delta = delta;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.lambda < T::zero() {
            return Err(Error::usage("riemna: lambda must be non-negative"));
        }
        if self.memory < 2 {
            return Err(Error::usage("riemna: memory depth must be at least 2"));
        }
        Ok(())
    }
}

/// One extrapolation: residuals → regularized coefficient solve → weighted
/// average of x_0..x_k (the input minus its newest point, which enters only
/// through its residual).
pub fn extrapolate<T: Real>(
    points: &[ManifoldPoint<T>],
    cfg: &RiemnaConfig<T>,
    geom: &mut Geom,
) -> Result<ManifoldPoint<T>> {
    if points.len() < 2 {
        return Err(Error::usage("extrapolate: need at least two iterates"));
    }
    if cfg.lambda < T::zero() {
        return Err(Error::usage("extrapolate: lambda must be non-negative"));
    }
    let buf = ResidualBuffer::from_iterates(points, geom)?;
    let coeffs = solve_coefficients(buf.gram(), cfg.effective_lambda(buf.gram()))?;
    average_with_scheme(&coeffs, &points[..points.len() - 1], Some(&buf), cfg, geom)
}

pub(crate) fn average_with_scheme<T: Real>(
    coeffs: &Coefficients<T>,
    window: &[ManifoldPoint<T>],
    buf: Option<&ResidualBuffer<T>>,
    cfg: &RiemnaConfig<T>,
    geom: &mut Geom,
) -> Result<ManifoldPoint<T>> {
    let c = coeffs.weights();
    match cfg.scheme {
        AveragingScheme::Recursive => average_recursive(c, window, geom),
        AveragingScheme::TangentAtLast => match buf {
            // buffer residual i is exactly the step x_i → x_{i+1}
            Some(buf) => average::average_tangent_from_buffer(c, buf, geom),
            None => average_tangent(c, window, geom),
        },
        AveragingScheme::Frechet => average_frechet(
            c,
            window,
            geom,
            cfg.frechet_inner_tol,
            cfg.frechet_max_iters,
        ),
    }
}
