//! The four benchmark objectives, each bundling a manifold binding, the
//! objective, a gradient, and (where available) a ground-truth oracle.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::{check_spd, inverse, qf, sym_eig, DenseMatrix};
use crate::manifold::{self, Manifold, ManifoldPoint, TangentVec};
use crate::scalar::Real;

type ObjFn<T> = dyn Fn(&ManifoldPoint<T>) -> T + Send + Sync;
type EGradFn<T> = dyn Fn(&ManifoldPoint<T>) -> Result<DenseMatrix<T>> + Send + Sync;
type RGradFn<T> = dyn Fn(&ManifoldPoint<T>) -> Result<TangentVec<T>> + Send + Sync;

/// An optimization problem over one of the supported manifolds.
///
/// The Riemannian gradient is derived from the Euclidean one through the
/// metric unless the problem supplies it directly (the SPD Fréchet mean does,
/// since the affine-invariant metric makes the Euclidean route needlessly
/// unstable).
#[derive(Clone)]
pub struct Problem<T> {
    manifold: Manifold,
    name: &'static str,
    objective: Arc<ObjFn<T>>,
    euclidean_gradient: Option<Arc<EGradFn<T>>>,
    riemannian_gradient: Option<Arc<RGradFn<T>>>,
    optimum_point: Option<ManifoldPoint<T>>,
    optimum_value: Option<T>,
    lipschitz: Option<T>,
}

impl<T: Real> Problem<T> {
    /// Problem defined by an objective and its Euclidean gradient.
    pub fn from_euclidean(
        manifold: Manifold,
        name: &'static str,
        objective: impl Fn(&ManifoldPoint<T>) -> T + Send + Sync + 'static,
        egrad: impl Fn(&ManifoldPoint<T>) -> Result<DenseMatrix<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            manifold,
            name,
            objective: Arc::new(objective),
            euclidean_gradient: Some(Arc::new(egrad)),
            riemannian_gradient: None,
            optimum_point: None,
            optimum_value: None,
            lipschitz: None,
        }
    }

    /// Problem defined by an objective and its Riemannian gradient.
    pub fn from_riemannian(
        manifold: Manifold,
        name: &'static str,
        objective: impl Fn(&ManifoldPoint<T>) -> T + Send + Sync + 'static,
        rgrad: impl Fn(&ManifoldPoint<T>) -> Result<TangentVec<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            manifold,
            name,
            objective: Arc::new(objective),
            euclidean_gradient: None,
            riemannian_gradient: Some(Arc::new(rgrad)),
            optimum_point: None,
            optimum_value: None,
            lipschitz: None,
        }
    }

    pub fn with_optimum_point(mut self, p: ManifoldPoint<T>) -> Self {
        self.optimum_point = Some(p);
        self
    }

    pub fn with_optimum_value(mut self, v: T) -> Self {
        self.optimum_value = Some(v);
        self
    }

    pub fn with_lipschitz(mut self, l: T) -> Self {
        self.lipschitz = Some(l);
        self
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn objective(&self, x: &ManifoldPoint<T>) -> T {
        (self.objective)(x)
    }

    /// Riemannian gradient at `x`.
    pub fn gradient(&self, x: &ManifoldPoint<T>) -> Result<TangentVec<T>> {
        if let Some(rg) = &self.riemannian_gradient {
            return rg(x);
        }
        let eg = self
            .euclidean_gradient
            .as_ref()
            .ok_or_else(|| Error::usage("problem has no gradient"))?(x)?;
        manifold::egrad_to_rgrad(x, &eg)
    }

    pub fn euclidean_gradient(&self, x: &ManifoldPoint<T>) -> Option<Result<DenseMatrix<T>>> {
        self.euclidean_gradient.as_ref().map(|g| g(x))
    }

    pub fn optimum_point(&self) -> Option<&ManifoldPoint<T>> {
        self.optimum_point.as_ref()
    }

    pub fn optimum_value(&self) -> Option<T> {
        self.optimum_value
    }

    /// Geodesic gradient-Lipschitz constant, when known.
    pub fn lipschitz(&self) -> Option<T> {
        self.lipschitz
    }
}

impl<T> std::fmt::Debug for Problem<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("manifold", &self.manifold)
            .finish_non_exhaustive()
    }
}

/// min −½ xᵀAx over the sphere: the leading eigenvector of a symmetric A.
///
/// The oracle (top eigenpair) comes from a dense eigendecomposition; the
/// Lipschitz constant is the eigengap, i.e. the spread λ_max − λ_min.
pub fn leading_eigenvector<T: Real>(a: DenseMatrix<T>) -> Result<Problem<T>> {
    a.check_symmetric("leading_eigenvector", 1e-12)?;
    let d = a.rows();
    let eig = sym_eig(&a)?;
    let lmin = eig.values[0];
    let lmax = eig.values[d - 1];
    let v1 = DenseMatrix::from_fn(d, 1, |i, _| eig.vectors[(i, d - 1)]);
    leading_eigenvector_from_parts(a, lmax, v1, lmax - lmin)
}

fn leading_eigenvector_from_parts<T: Real>(
    a: DenseMatrix<T>,
    lmax: T,
    v1: DenseMatrix<T>,
    eigengap: T,
) -> Result<Problem<T>> {
    let d = a.rows();
    let man = Manifold::Sphere { dim: d };
    let half = T::of(0.5);
    let a_obj = a.clone();
    let opt_point = ManifoldPoint::new(man, v1)?;
    Ok(Problem::from_euclidean(
        man,
        "eigvec",
        move |x| -half * x.value().dot(&(&a_obj * x.value())),
        move |x| Ok((&a * x.value()).scale(-T::one())),
    )
    .with_optimum_point(opt_point)
    .with_optimum_value(-half * lmax)
    .with_lipschitz(eigengap))
}

/// Fréchet mean of SPD matrices under the affine-invariant metric:
/// min 1/(2N) Σ ‖logm(X^{-1/2} A_i X^{-1/2})‖_F².
///
/// Supplies its Riemannian gradient −(1/N) Σ Exp_X⁻¹(A_i) directly.
pub fn spd_frechet_mean<T: Real>(mats: Vec<DenseMatrix<T>>) -> Result<Problem<T>> {
    if mats.is_empty() {
        return Err(Error::usage("spd_frechet_mean: need at least one matrix"));
    }
    let d = mats[0].rows();
    for m in &mats {
        if m.shape() != (d, d) {
            return Err(Error::shape("spd_frechet_mean: inconsistent dimensions"));
        }
        check_spd(m, "spd_frechet_mean")?;
    }
    let man = Manifold::Spd { dim: d };
    let n_inv = T::one() / T::of(mats.len() as f64);
    let half = T::of(0.5);
    let mats = Arc::new(mats);
    let mats_obj = Arc::clone(&mats);

    let objective = move |x: &ManifoldPoint<T>| -> T {
        match sym_eig(x.value()) {
            Ok(eig) if eig.values[0] > T::zero() => {
                let p = eig.recompose(|w| w.sqrt().recip());
                let mut acc = T::zero();
                for a in mats_obj.iter() {
                    let w = (&(&p * a) * &p).sym_part();
                    match sym_eig(&w) {
                        Ok(we) if we.values[0] > T::zero() => {
                            let l = we.recompose(|t| t.ln());
                            acc += l.dot(&l);
                        }
                        _ => return T::nan(),
                    }
                }
                half * n_inv * acc
            }
            _ => T::nan(),
        }
    };

    let rgrad = move |x: &ManifoldPoint<T>| -> Result<TangentVec<T>> {
        let eig = sym_eig(x.value())?;
        if eig.values[0] <= T::zero() {
            return Err(Error::Domain {
                what: "spd_frechet_mean: iterate left the SPD cone".into(),
                min_eigenvalue: eig.values[0].as_f64(),
            });
        }
        let s = eig.recompose(|w| w.sqrt());
        let p = eig.recompose(|w| w.sqrt().recip());
        let mut grad = DenseMatrix::zeros(d, d);
        for a in mats.iter() {
            let w = (&(&p * a) * &p).sym_part();
            let we = sym_eig(&w)?;
            if we.values[0] <= T::zero() {
                return Err(Error::Domain {
                    what: "spd_frechet_mean: whitened matrix not positive definite".into(),
                    min_eigenvalue: we.values[0].as_f64(),
                });
            }
            let l = we.recompose(|t| t.ln());
            // Exp_X⁻¹(A) = S logm(P A P) S
            grad = grad.axpy(-n_inv, &(&(&s * &l) * &s));
        }
        TangentVec::new(x.clone(), grad.sym_part())
    };

    Ok(Problem::from_riemannian(man, "spd-mean", objective, rgrad))
}

/// Orthogonal Procrustes on the Stiefel manifold: min ‖XA − B‖_F².
pub fn orthogonal_procrustes<T: Real>(a: DenseMatrix<T>, b: DenseMatrix<T>) -> Result<Problem<T>> {
    if !a.is_square() || b.cols() != a.rows() {
        return Err(Error::shape(format!(
            "orthogonal_procrustes: incompatible shapes A {:?}, B {:?}",
            a.shape(),
            b.shape()
        )));
    }
    let (p, r) = b.shape();
    if p < r {
        return Err(Error::shape(
            "orthogonal_procrustes: need B with rows >= cols",
        ));
    }
    let man = Manifold::Stiefel { rows: p, cols: r };
    let a_obj = a.clone();
    let b_obj = b.clone();
    let at = a.transpose();
    Ok(Problem::from_euclidean(
        man,
        "procrustes",
        move |x| {
            let resid = &(x.value() * &a_obj) - &b_obj;
            resid.dot(&resid)
        },
        move |x| {
            let resid = &(x.value() * &a) - &b;
            Ok((&resid * &at).scale(T::of(2.0)))
        },
    ))
}

/// Total-energy minimization (nonlinear eigenspace) on the Grassmann
/// manifold: min ½ tr(XᵀLX) + ¼ ρ(X)ᵀ L⁻¹ ρ(X) with ρ(X) = diag(XXᵀ).
pub fn nonlinear_eigenspace<T: Real>(l: DenseMatrix<T>, r: usize) -> Result<Problem<T>> {
    check_spd(&l, "nonlinear_eigenspace")?;
    let p = l.rows();
    if r == 0 || r > p {
        return Err(Error::shape("nonlinear_eigenspace: rank out of range"));
    }
    let l_inv = inverse(&l)?;
    let man = Manifold::Grassmann { rows: p, cols: r };

    let rho = move |x: &DenseMatrix<T>| -> DenseMatrix<T> {
        DenseMatrix::from_fn(p, 1, |j, _| {
            (0..x.cols()).map(|k| x[(j, k)] * x[(j, k)]).sum()
        })
    };

    let l_obj = l.clone();
    let l_inv_obj = l_inv.clone();
    let quarter = T::of(0.25);
    let half = T::of(0.5);

    Ok(Problem::from_euclidean(
        man,
        "nleig",
        move |x| {
            let xv = x.value();
            let rho_x = rho(xv);
            half * xv.dot(&(&l_obj * xv)) + quarter * rho_x.dot(&(&l_inv_obj * &rho_x))
        },
        move |x| {
            let xv = x.value();
            let rho_x = rho(xv);
            let weight = &l_inv * &rho_x;
            let mut g = &l * xv;
            for j in 0..p {
                for k in 0..g.cols() {
                    g[(j, k)] += weight[(j, 0)] * xv[(j, k)];
                }
            }
            Ok(g)
        },
    ))
}

/// Seeded instance generators used by the benchmark harness.
pub mod gen {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn randn<T: Real>(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> DenseMatrix<T> {
        DenseMatrix::from_fn(rows, cols, |_, _| {
            T::of(rng.sample::<f64, _>(rand_distr::StandardNormal))
        })
    }

    /// A = V diag(w) Vᵀ with w_i = cond^{-(i-1)/(d-1)}: exponentially decaying
    /// spectrum with condition number `cond` and unit top eigenvalue. The top
    /// eigenpair is known by construction, so no dense eigensolve is needed.
    pub fn leading_eigenvector<T: Real>(d: usize, cond: f64, seed: u64) -> Problem<T> {
        assert!(d >= 2, "need dimension >= 2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v = qf(&randn::<T>(d, d, &mut rng)).expect("random Gaussian matrix is full rank");
        let w: Vec<T> = (0..d)
            .map(|i| T::of(cond.powf(-(i as f64) / (d as f64 - 1.0))))
            .collect();
        let a = (&(&v * &DenseMatrix::diag(&w)) * &v.transpose()).sym_part();
        let v1 = DenseMatrix::from_fn(d, 1, |i, _| v[(i, 0)]);
        let eigengap = w[0] - w[d - 1];
        super::leading_eigenvector_from_parts(a, w[0], v1, eigengap)
            .expect("constructed matrix is symmetric")
    }

    /// N random SPD matrices A_i = Q diag(u) Qᵀ, u uniform in [0.5, 2].
    pub fn spd_frechet_mean<T: Real>(d: usize, n: usize, seed: u64) -> Problem<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mats: Vec<DenseMatrix<T>> = (0..n)
            .map(|_| {
                let q = qf(&randn::<T>(d, d, &mut rng)).expect("full rank");
                let u: Vec<T> = (0..d).map(|_| T::of(rng.random_range(0.5..2.0))).collect();
                (&(&q * &DenseMatrix::diag(&u)) * &q.transpose()).sym_part()
            })
            .collect();
        super::spd_frechet_mean(mats).expect("generated matrices are SPD")
    }

    /// Standard-Gaussian A (r×r) and B (p×r).
    pub fn procrustes<T: Real>(p: usize, r: usize, seed: u64) -> Problem<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = randn::<T>(r, r, &mut rng);
        let b = randn::<T>(p, r, &mut rng);
        super::orthogonal_procrustes(a, b).expect("shapes are consistent")
    }

    /// Discrete 1-D Laplacian: tridiagonal with 2 on the main diagonal and −1
    /// on the sub/super-diagonals.
    pub fn nonlinear_eigenspace<T: Real>(p: usize, r: usize) -> Problem<T> {
        let l = DenseMatrix::from_fn(p, p, |i, j| {
            if i == j {
                T::of(2.0)
            } else if i.abs_diff(j) == 1 {
                T::of(-1.0)
            } else {
                T::zero()
            }
        });
        super::nonlinear_eigenspace(l, r).expect("Laplacian is SPD")
    }
}
