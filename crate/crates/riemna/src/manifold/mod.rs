//! Manifold abstraction over the four concrete geometries: sphere, symmetric
//! positive definite (SPD), Stiefel, and Grassmann.
//!
//! Two operation modes exist. `Exact` uses the exponential map, inverse
//! exponential map, and parallel transport; it is available on the sphere and
//! SPD manifolds, where these have closed forms. `Retraction` uses a
//! retraction, inverse retraction, and vector transport; on Stiefel and
//! Grassmann these are QR-based, while on the sphere and SPD the retraction
//! simply aliases the exponential map, so both modes agree bit for bit there.

mod geom;
mod grassmann;
mod spd;
mod sphere;
mod stiefel;

pub use geom::{Geom, OpCounts};

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Real;

/// Manifold binding: kind plus dimensions. Attached to every point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manifold {
    /// Unit sphere S^{d-1} embedded in R^d; points are d×1 columns.
    Sphere { dim: usize },
    /// SPD matrices of size d×d with the affine-invariant metric.
    Spd { dim: usize },
    /// Stiefel manifold St(p, r) of p×r column-orthonormal matrices.
    Stiefel { rows: usize, cols: usize },
    /// Grassmann manifold Gr(p, r), represented by orthonormal p×r matrices.
    Grassmann { rows: usize, cols: usize },
}

/// Which set of geometric operations a solver drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GeometryMode {
    #[default]
    Exact,
    Retraction,
}

/// Which projection the Grassmann vector transport uses. The destination
/// projection U − YYᵀU yields a vector tangent at the target point and is the
/// default; the source variant U − XXᵀU is the identity on horizontal vectors
/// and is kept selectable for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GrassmannTransport {
    #[default]
    DestinationProjection,
    SourceProjection,
}

impl Manifold {
    pub fn point_shape(&self) -> (usize, usize) {
        match *self {
            Manifold::Sphere { dim } => (dim, 1),
            Manifold::Spd { dim } => (dim, dim),
            Manifold::Stiefel { rows, cols } | Manifold::Grassmann { rows, cols } => (rows, cols),
        }
    }

    /// Exact mode needs closed-form exp/log/parallel transport.
    pub fn supports_exact(&self) -> bool {
        matches!(self, Manifold::Sphere { .. } | Manifold::Spd { .. })
    }

    /// Exact where available, retraction elsewhere.
    pub fn natural_mode(&self) -> GeometryMode {
        if self.supports_exact() {
            GeometryMode::Exact
        } else {
            GeometryMode::Retraction
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Manifold::Sphere { .. } => "sphere",
            Manifold::Spd { .. } => "spd",
            Manifold::Stiefel { .. } => "stiefel",
            Manifold::Grassmann { .. } => "grassmann",
        }
    }

    fn check_shape<T: Real>(&self, value: &DenseMatrix<T>, ctx: &str) -> Result<()> {
        if value.shape() != self.point_shape() {
            return Err(Error::shape(format!(
                "{ctx}: expected {:?} matrix for {}, got {:?}",
                self.point_shape(),
                self.name(),
                value.shape()
            )));
        }
        Ok(())
    }

    /// Validate the point invariant for this manifold.
    pub fn check_point<T: Real>(&self, value: &DenseMatrix<T>) -> Result<()> {
        self.check_shape(value, "check_point")?;
        match self {
            Manifold::Sphere { .. } => sphere::check_point(value),
            Manifold::Spd { .. } => spd::check_point(value),
            Manifold::Stiefel { .. } => stiefel::check_point(value),
            Manifold::Grassmann { .. } => stiefel::check_point(value),
        }
    }
}

/// Point on a manifold: the binding plus a dense matrix representative.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint<T> {
    manifold: Manifold,
    value: DenseMatrix<T>,
}

impl<T: Real> ManifoldPoint<T> {
    /// Construct a point, validating the manifold invariant.
    pub fn new(manifold: Manifold, value: DenseMatrix<T>) -> Result<Self> {
        manifold.check_point(&value)?;
        Ok(Self { manifold, value })
    }

    pub(crate) fn new_unchecked(manifold: Manifold, value: DenseMatrix<T>) -> Self {
        Self { manifold, value }
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn value(&self) -> &DenseMatrix<T> {
        &self.value
    }

    pub fn into_value(self) -> DenseMatrix<T> {
        self.value
    }

    /// Numerically-same-point test (representatives compared entrywise).
    pub fn same_point(&self, other: &Self, tol: T) -> bool {
        self.manifold == other.manifold && (&self.value - &other.value).norm_max() <= tol
    }
}

/// Tangent vector; carries its base point.
#[derive(Debug, Clone)]
pub struct TangentVec<T> {
    base: ManifoldPoint<T>,
    value: DenseMatrix<T>,
}

impl<T: Real> TangentVec<T> {
    /// Construct a tangent vector, validating the tangency invariant.
    pub fn new(base: ManifoldPoint<T>, value: DenseMatrix<T>) -> Result<Self> {
        base.manifold().check_shape(&value, "TangentVec::new")?;
        let ok = match base.manifold() {
            Manifold::Sphere { .. } => sphere::check_tangent(base.value(), &value),
            Manifold::Spd { .. } => spd::check_tangent(&value),
            Manifold::Stiefel { .. } => stiefel::check_tangent(base.value(), &value),
            Manifold::Grassmann { .. } => grassmann::check_tangent(base.value(), &value),
        };
        ok?;
        Ok(Self { base, value })
    }

    pub(crate) fn new_unchecked(base: ManifoldPoint<T>, value: DenseMatrix<T>) -> Self {
        Self { base, value }
    }

    pub fn zero(base: ManifoldPoint<T>) -> Self {
        let (r, c) = base.manifold().point_shape();
        Self {
            value: DenseMatrix::zeros(r, c),
            base,
        }
    }

    pub fn base(&self) -> &ManifoldPoint<T> {
        &self.base
    }

    pub fn value(&self) -> &DenseMatrix<T> {
        &self.value
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            base: self.base.clone(),
            value: self.value.scale(s),
        }
    }

    /// self + alpha · other; both must share a base point.
    pub fn axpy(&self, alpha: T, other: &Self) -> Result<Self> {
        check_same_base(self, other)?;
        Ok(Self {
            base: self.base.clone(),
            value: self.value.axpy(alpha, &other.value),
        })
    }
}

fn check_same_base<T: Real>(u: &TangentVec<T>, v: &TangentVec<T>) -> Result<()> {
    if !u.base.same_point(&v.base, T::of(1e-10)) {
        return Err(Error::usage("tangent vectors based at different points"));
    }
    Ok(())
}

/// Riemannian inner product of two tangent vectors at the same point.
pub fn inner<T: Real>(u: &TangentVec<T>, v: &TangentVec<T>) -> Result<T> {
    check_same_base(u, v)?;
    match u.base.manifold() {
        Manifold::Spd { .. } => spd::inner(u.base.value(), u.value(), v.value()),
        // embedded Euclidean metric everywhere else
        _ => Ok(u.value().dot(v.value())),
    }
}

/// Riemannian norm of a tangent vector.
pub fn norm<T: Real>(u: &TangentVec<T>) -> Result<T> {
    match u.base.manifold() {
        Manifold::Spd { .. } => Ok(spd::inner(u.base.value(), u.value(), u.value())?.sqrt()),
        _ => Ok(u.value().norm_fro()),
    }
}

fn require_exact(man: &Manifold, op: &str) -> Result<()> {
    if !man.supports_exact() {
        return Err(Error::Mode(format!(
            "{op}: exact geometry unavailable on {}; use retraction mode",
            man.name()
        )));
    }
    Ok(())
}

/// Exponential map (Exact mode only).
pub fn exp<T: Real>(x: &ManifoldPoint<T>, u: &TangentVec<T>) -> Result<ManifoldPoint<T>> {
    require_exact(&x.manifold(), "exp")?;
    if !u.base().same_point(x, T::of(1e-10)) {
        return Err(Error::usage("exp: tangent vector based elsewhere"));
    }
    let value = match x.manifold() {
        Manifold::Sphere { .. } => sphere::exp(x.value(), u.value()),
        Manifold::Spd { .. } => spd::exp(x.value(), u.value())?,
        _ => unreachable!(),
    };
    Ok(ManifoldPoint::new_unchecked(x.manifold(), value))
}

/// Inverse exponential map (Exact mode only).
pub fn log<T: Real>(x: &ManifoldPoint<T>, y: &ManifoldPoint<T>) -> Result<TangentVec<T>> {
    require_exact(&x.manifold(), "log")?;
    if x.manifold() != y.manifold() {
        return Err(Error::usage("log: points on different manifolds"));
    }
    let value = match x.manifold() {
        Manifold::Sphere { .. } => sphere::log(x.value(), y.value())?,
        Manifold::Spd { .. } => spd::log(x.value(), y.value())?,
        _ => unreachable!(),
    };
    Ok(TangentVec::new_unchecked(x.clone(), value))
}

/// Retraction. On the sphere and SPD manifolds this is the exponential map;
/// on Stiefel and Grassmann it is QR-based.
pub fn retract<T: Real>(x: &ManifoldPoint<T>, u: &TangentVec<T>) -> Result<ManifoldPoint<T>> {
    if !u.base().same_point(x, T::of(1e-10)) {
        return Err(Error::usage("retract: tangent vector based elsewhere"));
    }
    let value = match x.manifold() {
        Manifold::Sphere { .. } => sphere::exp(x.value(), u.value()),
        Manifold::Spd { .. } => spd::exp(x.value(), u.value())?,
        Manifold::Stiefel { .. } | Manifold::Grassmann { .. } => {
            stiefel::retract(x.value(), u.value())?
        }
    };
    Ok(ManifoldPoint::new_unchecked(x.manifold(), value))
}

/// Inverse retraction; see [`retract`].
pub fn inv_retract<T: Real>(x: &ManifoldPoint<T>, y: &ManifoldPoint<T>) -> Result<TangentVec<T>> {
    if x.manifold() != y.manifold() {
        return Err(Error::usage("inv_retract: points on different manifolds"));
    }
    let value = match x.manifold() {
        Manifold::Sphere { .. } => sphere::log(x.value(), y.value())?,
        Manifold::Spd { .. } => spd::log(x.value(), y.value())?,
        Manifold::Stiefel { .. } => stiefel::inv_retract(x.value(), y.value())?,
        Manifold::Grassmann { .. } => grassmann::inv_retract(x.value(), y.value())?,
    };
    Ok(TangentVec::new_unchecked(x.clone(), value))
}

/// Transport a tangent vector to the tangent space at `to`. Parallel
/// transport on SPD, projection-type vector transport elsewhere.
pub fn transport<T: Real>(u: &TangentVec<T>, to: &ManifoldPoint<T>) -> Result<TangentVec<T>> {
    transport_with(u, to, GrassmannTransport::default())
}

/// [`transport`] with an explicit choice of the Grassmann projection variant.
pub fn transport_with<T: Real>(
    u: &TangentVec<T>,
    to: &ManifoldPoint<T>,
    grassmann: GrassmannTransport,
) -> Result<TangentVec<T>> {
    if u.base().manifold() != to.manifold() {
        return Err(Error::usage(
            "transport: vector and point on different manifolds",
        ));
    }
    let value = match to.manifold() {
        Manifold::Sphere { .. } => sphere::transport(u.value(), to.value()),
        Manifold::Spd { .. } => spd::transport(u.base().value(), to.value(), u.value())?,
        Manifold::Stiefel { .. } => stiefel::transport(u.value(), to.value()),
        Manifold::Grassmann { .. } => {
            grassmann::transport(u.base().value(), u.value(), to.value(), grassmann)
        }
    };
    Ok(TangentVec::new_unchecked(to.clone(), value))
}

/// Riemannian distance in Exact mode; the inverse-retraction norm surrogate
/// on Stiefel and Grassmann.
pub fn dist<T: Real>(x: &ManifoldPoint<T>, y: &ManifoldPoint<T>) -> Result<T> {
    if x.manifold() != y.manifold() {
        return Err(Error::usage("dist: points on different manifolds"));
    }
    match x.manifold() {
        Manifold::Sphere { .. } => sphere::dist(x.value(), y.value()),
        Manifold::Spd { .. } => spd::dist(x.value(), y.value()),
        Manifold::Stiefel { .. } | Manifold::Grassmann { .. } => norm(&inv_retract(x, y)?),
    }
}

/// Convert a Euclidean gradient into the Riemannian gradient at `x`.
pub fn egrad_to_rgrad<T: Real>(x: &ManifoldPoint<T>, g: &DenseMatrix<T>) -> Result<TangentVec<T>> {
    x.manifold().check_shape(g, "egrad_to_rgrad")?;
    let value = match x.manifold() {
        Manifold::Sphere { .. } => sphere::project(x.value(), g),
        Manifold::Spd { .. } => spd::egrad_to_rgrad(x.value(), g),
        Manifold::Stiefel { .. } => stiefel::project(x.value(), g),
        Manifold::Grassmann { .. } => grassmann::project(x.value(), g),
    };
    Ok(TangentVec::new_unchecked(x.clone(), value))
}

/// Uniform-ish random point satisfying the manifold invariant.
pub fn random_point<T: Real, R: Rng + ?Sized>(manifold: Manifold, rng: &mut R) -> ManifoldPoint<T> {
    let value = match manifold {
        Manifold::Sphere { dim } => sphere::random_point(dim, rng),
        Manifold::Spd { dim } => spd::random_point(dim, rng),
        Manifold::Stiefel { rows, cols } | Manifold::Grassmann { rows, cols } => {
            stiefel::random_point(rows, cols, rng)
        }
    };
    ManifoldPoint::new_unchecked(manifold, value)
}

/// Random tangent vector at `x`, scaled to the requested Riemannian norm.
pub fn random_tangent<T: Real, R: Rng + ?Sized>(
    x: &ManifoldPoint<T>,
    rng: &mut R,
    norm_target: T,
) -> TangentVec<T> {
    let raw = gaussian_like(x.value(), rng);
    let projected = match x.manifold() {
        Manifold::Sphere { .. } => sphere::project(x.value(), &raw),
        Manifold::Spd { .. } => raw.sym_part(),
        Manifold::Stiefel { .. } => stiefel::project(x.value(), &raw),
        Manifold::Grassmann { .. } => grassmann::project(x.value(), &raw),
    };
    let u = TangentVec::new_unchecked(x.clone(), projected);
    let n = norm(&u).unwrap_or(T::zero());
    if norm_target == T::zero() || n == T::zero() {
        return TangentVec::zero(x.clone());
    }
    u.scale(norm_target / n)
}

pub(crate) fn gaussian_like<T: Real, R: Rng + ?Sized>(
    like: &DenseMatrix<T>,
    rng: &mut R,
) -> DenseMatrix<T> {
    let (r, c) = like.shape();
    DenseMatrix::from_fn(r, c, |_, _| {
        T::of(rng.sample::<f64, _>(rand_distr::StandardNormal))
    })
}

/// Largest principal-angle gap between the subspaces spanned by two
/// orthonormal representatives: 0 means equal subspaces.
pub fn subspace_gap<T: Real>(x: &ManifoldPoint<T>, y: &ManifoldPoint<T>) -> Result<T> {
    grassmann::subspace_gap(x.value(), y.value())
}
