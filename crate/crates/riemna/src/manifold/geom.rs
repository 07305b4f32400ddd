//! Mode-aware geometry dispatcher with exact call accounting.
//!
//! Solvers never call the raw manifold operations directly; they go through a
//! [`Geom`] so that every geometry call increments exactly one counter. The
//! counters feed the per-iteration cost comparisons and the CSV trace.

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{GeometryMode, GrassmannTransport, ManifoldPoint, TangentVec};

/// Cumulative geometry-operation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounts {
    pub exp: u64,
    pub log: u64,
    pub retract: u64,
    pub inv_retract: u64,
    pub transport: u64,
}

impl OpCounts {
    /// exp + log + transport, the cost measure used for the exact-geometry
    /// comparisons.
    pub fn exact_total(&self) -> u64 {
        self.exp + self.log + self.transport
    }

    pub fn total(&self) -> u64 {
        self.exp + self.log + self.retract + self.inv_retract + self.transport
    }
}

impl std::ops::AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.exp += rhs.exp;
        self.log += rhs.log;
        self.retract += rhs.retract;
        self.inv_retract += rhs.inv_retract;
        self.transport += rhs.transport;
    }
}

/// Geometry dispatcher: a mode, the Grassmann transport variant, and counters.
#[derive(Debug, Clone)]
pub struct Geom {
    pub mode: GeometryMode,
    pub grassmann_transport: GrassmannTransport,
    counts: OpCounts,
}

impl Geom {
    pub fn new(mode: GeometryMode) -> Self {
        Self {
            mode,
            grassmann_transport: GrassmannTransport::default(),
            counts: OpCounts::default(),
        }
    }

    /// Exact mode where the manifold has closed forms, retraction elsewhere.
    pub fn natural(manifold: &super::Manifold) -> Self {
        Self::new(manifold.natural_mode())
    }

    pub fn counts(&self) -> OpCounts {
        self.counts
    }

    pub fn reset_counts(&mut self) {
        self.counts = OpCounts::default();
    }

    fn check_mode<T: Real>(&self, x: &ManifoldPoint<T>, op: &str) -> Result<()> {
        if self.mode == GeometryMode::Exact && !x.manifold().supports_exact() {
            return Err(Error::Mode(format!(
                "{op}: exact mode requested on {}, which only supports retraction",
                x.manifold().name()
            )));
        }
        Ok(())
    }

    /// Move from `x` along `u`: exponential map in Exact mode, retraction in
    /// Retraction mode (they coincide on sphere/SPD).
    pub fn step<T: Real>(
        &mut self,
        x: &ManifoldPoint<T>,
        u: &TangentVec<T>,
    ) -> Result<ManifoldPoint<T>> {
        self.check_mode(x, "step")?;
        match self.mode {
            GeometryMode::Exact => {
                self.counts.exp += 1;
                super::exp(x, u)
            }
            GeometryMode::Retraction => {
                self.counts.retract += 1;
                super::retract(x, u)
            }
        }
    }

    /// Tangent vector pointing from `x` to `y`: inverse exponential map or
    /// inverse retraction depending on the mode.
    pub fn inv_step<T: Real>(
        &mut self,
        x: &ManifoldPoint<T>,
        y: &ManifoldPoint<T>,
    ) -> Result<TangentVec<T>> {
        self.check_mode(x, "inv_step")?;
        match self.mode {
            GeometryMode::Exact => {
                self.counts.log += 1;
                super::log(x, y)
            }
            GeometryMode::Retraction => {
                self.counts.inv_retract += 1;
                super::inv_retract(x, y)
            }
        }
    }

    /// Transport `u` to the tangent space at `to`. One transport counter for
    /// both parallel and vector transport.
    pub fn carry<T: Real>(
        &mut self,
        u: &TangentVec<T>,
        to: &ManifoldPoint<T>,
    ) -> Result<TangentVec<T>> {
        self.counts.transport += 1;
        super::transport_with(u, to, self.grassmann_transport)
    }

    /// Distance in Exact mode; the inverse-retraction norm surrogate in
    /// Retraction mode. Counted as the underlying inverse map.
    pub fn dist<T: Real>(&mut self, x: &ManifoldPoint<T>, y: &ManifoldPoint<T>) -> Result<T> {
        match self.mode {
            GeometryMode::Exact => {
                self.check_mode(x, "dist")?;
                self.counts.log += 1;
                super::dist(x, y)
            }
            GeometryMode::Retraction => {
                let u = self.inv_step(x, y)?;
                super::norm(&u)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;

    use crate::manifold::{self, GeometryMode, Manifold};

    use super::*;

    #[test]
    fn counters_increment_once_per_call() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let man = Manifold::Sphere { dim: 5 };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 0.2);

        let mut geom = Geom::new(GeometryMode::Exact);
        let y = geom.step(&x, &u).unwrap();
        let _ = geom.inv_step(&x, &y).unwrap();
        let _ = geom.carry(&u, &y).unwrap();
        assert_eq!(
            geom.counts(),
            OpCounts {
                exp: 1,
                log: 1,
                transport: 1,
                ..Default::default()
            }
        );
    }

    #[test]
    fn retraction_mode_aliases_exp_on_sphere() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let man = Manifold::Sphere { dim: 5 };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 0.2);

        let mut exact = Geom::new(GeometryMode::Exact);
        let mut retr = Geom::new(GeometryMode::Retraction);
        let y1 = exact.step(&x, &u).unwrap();
        let y2 = retr.step(&x, &u).unwrap();
        // bit-for-bit agreement
        assert_eq!(y1.value().as_slice(), y2.value().as_slice());
        assert_eq!(retr.counts().retract, 1);
        assert_eq!(retr.counts().exp, 0);
    }

    #[test]
    fn exact_mode_rejected_on_stiefel() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let man = Manifold::Stiefel { rows: 5, cols: 2 };
        let x = manifold::random_point::<f64, _>(man, &mut rng);
        let u = manifold::random_tangent(&x, &mut rng, 0.2);
        let mut geom = Geom::new(GeometryMode::Exact);
        assert!(matches!(
            geom.step(&x, &u),
            Err(crate::error::Error::Mode(_))
        ));
    }
}
