//! Riemannian gradient descent and the Nesterov-style baselines (RAGD,
//! RNAG-C, RNAG-SC), instrumented with per-iteration traces and exact
//! geometry-call accounting.
//!
//! All solvers stop when the Riemannian gradient norm of the main iterate
//! drops to `grad_tol`, or at `max_iters` steps. A non-finite objective or
//! gradient norm raises a divergence error carrying the trace accumulated so
//! far. Timing uses a monotonic clock; a single untimed warm-up step absorbs
//! first-call allocation noise before the clock starts.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::manifold::{Geom, GeometryMode, ManifoldPoint, OpCounts, TangentVec};
use crate::problems::Problem;
use crate::scalar::Real;

/// Solver parameters. Baseline-specific fields are ignored by the solvers
/// that do not use them.
#[derive(Debug, Clone)]
pub struct SolverConfig<T> {
    /// Fixed stepsize η (RAGD calls it h, RNAG calls it s).
    pub stepsize: T,
    /// Stop when the Riemannian gradient norm falls below this.
    pub grad_tol: T,
    pub max_iters: usize,
    /// Geometry mode; `None` picks the manifold's natural mode.
    pub mode: Option<GeometryMode>,
    /// Strong-convexity parameter (RAGD, RNAG-SC).
    pub mu: T,
    /// RAGD momentum parameter; defaults to √(μ·stepsize)/5 when unset.
    pub beta: Option<T>,
    /// RNAG shift parameter ξ.
    pub xi: T,
    /// RNAG-C shift parameter T in λ_k = (k + 2ξ + T)/2.
    pub t_shift: T,
}

impl<T: Real> SolverConfig<T> {
    pub fn new(stepsize: T) -> Self {
        assert!(stepsize > T::zero(), "stepsize must be positive");
        Self {
            stepsize,
            grad_tol: T::of(1e-6),
            max_iters: 10_000,
            mode: None,
            mu: T::one(),
            beta: None,
            xi: T::one(),
            t_shift: T::one(),
        }
    }

    pub fn with_grad_tol(mut self, tol: T) -> Self {
        assert!(tol > T::zero(), "grad_tol must be positive");
        self.grad_tol = tol;
        self
    }

    pub fn with_max_iters(mut self, n: usize) -> Self {
        self.max_iters = n;
        self
    }

    pub fn with_mode(mut self, mode: GeometryMode) -> Self {
        self.mode = Some(mode);
        self
    }

    pub fn with_mu(mut self, mu: T) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_beta(mut self, beta: T) -> Self {
        self.beta = Some(beta);
        self
    }

    pub fn with_xi(mut self, xi: T) -> Self {
        self.xi = xi;
        self
    }

    pub fn with_t_shift(mut self, t: T) -> Self {
        self.t_shift = t;
        self
    }

    pub(crate) fn geom_for(&self, x: &ManifoldPoint<T>) -> Geom {
        match self.mode {
            Some(mode) => Geom::new(mode),
            None => Geom::natural(&x.manifold()),
        }
    }
}

/// One recorded iterate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRow {
    pub iter: u64,
    pub seconds: f64,
    pub objective: f64,
    pub grad_norm: f64,
    pub counts: OpCounts,
}

/// Per-run record: one row per recorded iterate, with cumulative wall time
/// and geometry-call counters.
#[derive(Debug, Clone, Default)]
pub struct SolverTrace {
    pub rows: Vec<TraceRow>,
    pub converged: bool,
}

impl SolverTrace {
    pub(crate) fn push(
        &mut self,
        iter: u64,
        started: &Instant,
        objective: f64,
        grad_norm: f64,
        counts: OpCounts,
    ) {
        debug_assert!(self.rows.last().is_none_or(|r| r.iter < iter));
        self.rows.push(TraceRow {
            iter,
            seconds: started.elapsed().as_secs_f64(),
            objective,
            grad_norm,
            counts,
        });
    }

    /// Index of the last recorded iterate (0 when only the start was recorded).
    pub fn iterations(&self) -> u64 {
        self.rows.last().map_or(0, |r| r.iter)
    }

    pub fn final_objective(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.objective)
    }

    pub fn final_grad_norm(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.grad_norm)
    }

    pub fn final_counts(&self) -> OpCounts {
        self.rows
            .last()
            .map_or_else(OpCounts::default, |r| r.counts)
    }

    pub fn final_seconds(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.seconds)
    }
}

/// A finished run: the final iterate plus its trace.
#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub point: ManifoldPoint<T>,
    pub trace: SolverTrace,
}

/// One gradient-descent step: x ← Exp_x(−η grad f(x)) (or the retraction
/// analogue, depending on the mode).
pub fn rgd_step<T: Real>(
    x: &ManifoldPoint<T>,
    problem: &Problem<T>,
    eta: T,
    geom: &mut Geom,
) -> Result<ManifoldPoint<T>> {
    let g = problem.gradient(x)?;
    geom.step(x, &g.scale(-eta))
}

/// Run one untimed, uncounted step so allocator warm-up stays out of the
/// timing column.
fn warm_up<T: Real>(x0: &ManifoldPoint<T>, problem: &Problem<T>, cfg: &SolverConfig<T>) {
    let mut scratch = cfg.geom_for(x0);
    let _ = rgd_step(x0, problem, cfg.stepsize, &mut scratch);
}

struct Observation<T> {
    grad: TangentVec<T>,
    grad_norm: T,
    objective: T,
}

fn observe<T: Real>(x: &ManifoldPoint<T>, problem: &Problem<T>) -> Result<Observation<T>> {
    let grad = problem.gradient(x)?;
    let grad_norm = crate::manifold::norm(&grad)?;
    let objective = problem.objective(x);
    Ok(Observation {
        grad,
        grad_norm,
        objective,
    })
}

fn check_finite<T: Real>(obs: &Observation<T>, iter: u64, trace: &SolverTrace) -> Result<()> {
    if !obs.objective.is_finite() || !obs.grad_norm.is_finite() {
        return Err(Error::Diverged {
            iter,
            trace: Box::new(trace.clone()),
        });
    }
    Ok(())
}

/// Riemannian gradient descent with fixed stepsize.
pub fn rgd_run<T: Real>(
    x0: &ManifoldPoint<T>,
    problem: &Problem<T>,
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    warm_up(x0, problem, cfg);
    let mut geom = cfg.geom_for(x0);
    let mut trace = SolverTrace::default();
    let started = Instant::now();

    let mut x = x0.clone();
    for k in 0..=cfg.max_iters as u64 {
        let obs = observe(&x, problem)?;
        check_finite(&obs, k, &trace)?;
        trace.push(
            k,
            &started,
            obs.objective.as_f64(),
            obs.grad_norm.as_f64(),
            geom.counts(),
        );
        if obs.grad_norm <= cfg.grad_tol {
            trace.converged = true;
            break;
        }
        if k == cfg.max_iters as u64 {
            break;
        }
        x = geom.step(&x, &obs.grad.scale(-cfg.stepsize))?;
    }
    Ok(RunResult { point: x, trace })
}

/// RAGD: constant-stepsize Riemannian accelerated gradient descent.
///
/// With h the stepsize, the momentum constants are fixed up front:
/// α = (√(β² + 4(1+β)μh) − β)/2,  γ = μ(√D − β)/(√D + β),  γ̄ = (1+β)γ,
/// and each iteration performs
///   y_k = Exp_{x_k}(αγ/(γ+αμ) · Exp⁻¹_{x_k}(v_k)),
///   x_{k+1} = Exp_{y_k}(−h grad f(y_k)),
///   v_{k+1} = Exp_{y_k}((1−α)γ/γ̄ · Exp⁻¹_{y_k}(v_k) − α/γ̄ · grad f(y_k)).
pub fn ragd_run<T: Real>(
    x0: &ManifoldPoint<T>,
    problem: &Problem<T>,
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    if cfg.mu <= T::zero() {
        return Err(Error::usage("ragd_run: needs mu > 0"));
    }
    let h = cfg.stepsize;
    let beta = cfg.beta.unwrap_or_else(|| (cfg.mu * h).sqrt() / T::of(5.0));
    if beta <= T::zero() {
        return Err(Error::usage("ragd_run: needs beta > 0"));
    }
    let disc = (beta * beta + T::of(4.0) * (T::one() + beta) * cfg.mu * h).sqrt();
    let alpha = (disc - beta) / T::of(2.0);
    let gamma = cfg.mu * (disc - beta) / (disc + beta);
    let gamma_bar = (T::one() + beta) * gamma;

    let y_coef = alpha * gamma / (gamma + alpha * cfg.mu);
    let v_coef = (T::one() - alpha) * gamma / gamma_bar;
    let g_coef = alpha / gamma_bar;

    warm_up(x0, problem, cfg);
    let mut geom = cfg.geom_for(x0);
    let mut trace = SolverTrace::default();
    let started = Instant::now();

    let mut x = x0.clone();
    let mut v = x0.clone();
    for k in 0..=cfg.max_iters as u64 {
        let obs = observe(&x, problem)?;
        check_finite(&obs, k, &trace)?;
        trace.push(
            k,
            &started,
            obs.objective.as_f64(),
            obs.grad_norm.as_f64(),
            geom.counts(),
        );
        if obs.grad_norm <= cfg.grad_tol {
            trace.converged = true;
            break;
        }
        if k == cfg.max_iters as u64 {
            break;
        }

        let to_v = geom.inv_step(&x, &v)?;
        let y = geom.step(&x, &to_v.scale(y_coef))?;
        let gy = problem.gradient(&y)?;
        let x_next = geom.step(&y, &gy.scale(-h))?;
        let to_v_at_y = geom.inv_step(&y, &v)?;
        let v_dir = to_v_at_y.scale(v_coef).axpy(-g_coef, &gy)?;
        v = geom.step(&y, &v_dir)?;
        x = x_next;
    }
    Ok(RunResult { point: x, trace })
}

/// RNAG-C, the Nesterov baseline for geodesic convex objectives.
///
/// λ_k = (k + 2ξ + T)/2 and per iteration (2 exp, 2 log, 2 transports):
///   y_k = Exp_{x_k}(ξ/(λ_k+ξ−1) · v̄_k),
///   x_{k+1} = Exp_{y_k}(−s grad f(y_k)),
///   v_k = Γ_{x_k}^{y_k}(v̄_k − Exp⁻¹_{x_k}(y_k)),
///   v̄_{k+1} = Γ_{y_k}^{x_{k+1}}(v_k − sλ_k/ξ · grad f(y_k) − Exp⁻¹_{y_k}(x_{k+1})).
pub fn rnag_c_run<T: Real>(
    x0: &ManifoldPoint<T>,
    problem: &Problem<T>,
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    rnag_run(x0, problem, cfg, RnagFlavor::Convex)
}

/// RNAG-SC, the Nesterov baseline for geodesic strongly convex objectives
/// (q = μs, momentum coefficient √(ξq)/(1+√(ξq))).
pub fn rnag_sc_run<T: Real>(
    x0: &ManifoldPoint<T>,
    problem: &Problem<T>,
    cfg: &SolverConfig<T>,
) -> Result<RunResult<T>> {
    if cfg.mu <= T::zero() {
        return Err(Error::usage("rnag_sc_run: needs mu > 0"));
    }
    rnag_run(x0, problem, cfg, RnagFlavor::StronglyConvex)
}

enum RnagFlavor {
    Convex,
    StronglyConvex,
}

type GradMix<'a, T> = Box<dyn Fn(&TangentVec<T>, &TangentVec<T>) -> Result<TangentVec<T>> + 'a>;

fn rnag_run<T: Real>(
    x0: &ManifoldPoint<T>,
    problem: &Problem<T>,
    cfg: &SolverConfig<T>,
    flavor: RnagFlavor,
) -> Result<RunResult<T>> {
    let s = cfg.stepsize;
    let xi = cfg.xi;
    if xi < T::one() {
        return Err(Error::usage("rnag: needs xi >= 1"));
    }

    warm_up(x0, problem, cfg);
    let mut geom = cfg.geom_for(x0);
    let mut trace = SolverTrace::default();
    let started = Instant::now();

    let mut x = x0.clone();
    let mut v_bar = TangentVec::zero(x0.clone());
    for k in 0..=cfg.max_iters as u64 {
        let obs = observe(&x, problem)?;
        check_finite(&obs, k, &trace)?;
        trace.push(
            k,
            &started,
            obs.objective.as_f64(),
            obs.grad_norm.as_f64(),
            geom.counts(),
        );
        if obs.grad_norm <= cfg.grad_tol {
            trace.converged = true;
            break;
        }
        if k == cfg.max_iters as u64 {
            break;
        }

        let (y_coef, grad_mix): (T, GradMix<T>) = match flavor {
            RnagFlavor::Convex => {
                let lambda_k = (T::of(k as f64) + T::of(2.0) * xi + cfg.t_shift) / T::of(2.0);
                let yc = xi / (lambda_k + xi - T::one());
                let f =
                    move |v_k: &TangentVec<T>, gy: &TangentVec<T>| v_k.axpy(-s * lambda_k / xi, gy);
                (yc, Box::new(f))
            }
            RnagFlavor::StronglyConvex => {
                let q = cfg.mu * s;
                let root = (xi * q).sqrt();
                let yc = root / (T::one() + root);
                let mix = (q / xi).sqrt();
                let mu = cfg.mu;
                let f = move |v_k: &TangentVec<T>, gy: &TangentVec<T>| {
                    v_k.scale(T::one() - mix).axpy(-mix / mu, gy)
                };
                (yc, Box::new(f))
            }
        };

        let y = geom.step(&x, &v_bar.scale(y_coef))?;
        let gy = problem.gradient(&y)?;
        let x_next = geom.step(&y, &gy.scale(-s))?;

        let x_to_y = geom.inv_step(&x, &y)?;
        let v_k = geom.carry(&v_bar.axpy(-T::one(), &x_to_y)?, &y)?;
        let v_mixed = grad_mix(&v_k, &gy)?;
        let y_to_next = geom.inv_step(&y, &x_next)?;
        v_bar = geom.carry(&v_mixed.axpy(-T::one(), &y_to_next)?, &x_next)?;
        x = x_next;
    }
    Ok(RunResult { point: x, trace })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use crate::linalg::DenseMatrix;
    use crate::manifold::{self, Manifold};
    use crate::problems::{self, gen};

    use super::*;

    #[test]
    fn rgd_step_fixed_at_stationary_point() {
        // top eigenvector of A = diag(2,1) is e1; the step is a no-op
        let p = problems::leading_eigenvector(DenseMatrix::diag(&[2.0, 1.0])).unwrap();
        let x = ManifoldPoint::new(p.manifold(), DenseMatrix::column(&[1.0, 0.0])).unwrap();
        let mut geom = Geom::natural(&p.manifold());
        let y = rgd_step(&x, &p, 0.5, &mut geom).unwrap();
        assert!(y.same_point(&x, 1e-12));
    }

    #[test]
    fn rgd_step_keeps_minimizer_of_frechet_mean() {
        // N = 1: the minimizer is A itself, any stepsize
        let a = DenseMatrix::diag(&[1.3, 0.6]);
        let p = problems::spd_frechet_mean(vec![a.clone()]).unwrap();
        let x = ManifoldPoint::new(p.manifold(), a).unwrap();
        let mut geom = Geom::natural(&p.manifold());
        let y = rgd_step(&x, &p, 0.9, &mut geom).unwrap();
        assert!(y.same_point(&x, 1e-12));
    }

    #[test]
    fn rgd_stops_immediately_at_minimizer() {
        let p = gen::leading_eigenvector::<f64>(12, 100.0, 40);
        let x0 = p.optimum_point().unwrap().clone();
        let cfg = SolverConfig::new(1.0 / p.lipschitz().unwrap());
        let run = rgd_run(&x0, &p, &cfg).unwrap();
        assert!(run.trace.converged);
        assert!(run.trace.iterations() <= 1);
    }

    #[test]
    fn rgd_converges_to_top_eigenvector() {
        let p = gen::leading_eigenvector::<f64>(50, 1000.0, 41);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(1.0 / p.lipschitz().unwrap()).with_max_iters(20_000);
        let run = rgd_run(&x0, &p, &cfg).unwrap();
        assert!(
            run.trace.converged,
            "grad norm {}",
            run.trace.final_grad_norm()
        );
        let align = run
            .point
            .value()
            .dot(p.optimum_point().unwrap().value())
            .abs();
        assert!(align >= 1.0 - 1e-8, "alignment {align}");
    }

    #[test]
    fn rgd_objective_monotone_at_safe_stepsize() {
        let p = gen::leading_eigenvector::<f64>(30, 100.0, 43);
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(1.0 / p.lipschitz().unwrap()).with_max_iters(500);
        let run = rgd_run(&x0, &p, &cfg).unwrap();
        for w in run.trace.rows.windows(2) {
            assert!(w[1].objective <= w[0].objective + 1e-12);
        }
    }

    #[test]
    fn rgd_with_oversized_step_does_not_converge() {
        let p = gen::leading_eigenvector::<f64>(30, 1000.0, 45);
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(1000.0 / p.lipschitz().unwrap()).with_max_iters(300);
        match rgd_run(&x0, &p, &cfg) {
            Ok(run) => assert!(!run.trace.converged),
            Err(Error::Diverged { .. }) => {}
            Err(other) => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn ragd_constant_on_flat_gradient() {
        // A = I makes the objective constant: iterates never move
        let p = problems::leading_eigenvector(DenseMatrix::<f64>::identity(5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(0.5).with_mu(1.0).with_max_iters(5);
        let run = ragd_run(&x0, &p, &cfg).unwrap();
        assert!(run.trace.converged);
        assert!(run.point.same_point(&x0, 1e-10));
    }

    #[test]
    fn ragd_alpha_satisfies_its_quadratic() {
        // beta = 0.1, mu*h = 0.01: alpha solves alpha^2 = h((1-alpha)gamma + alpha*mu)
        let (beta, mu, h) = (0.1_f64, 1.0_f64, 0.01_f64);
        let disc = (beta * beta + 4.0 * (1.0 + beta) * mu * h).sqrt();
        let alpha = (disc - beta) / 2.0;
        assert!((alpha - ((0.01 + 4.4 * 0.01f64).sqrt() - 0.1) / 2.0).abs() <= 1e-15);
        let gamma = mu * (disc - beta) / (disc + beta);
        let rhs = h * ((1.0 - alpha) * gamma + alpha * mu);
        assert!((alpha * alpha - rhs).abs() <= 1e-14);
    }

    #[test]
    fn ragd_converges_on_eigvec_instance() {
        let p = gen::leading_eigenvector::<f64>(40, 100.0, 48);
        let mut rng = ChaCha8Rng::seed_from_u64(49);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let l = p.lipschitz().unwrap();
        let cfg = SolverConfig::new(1.0 / l)
            .with_mu(10.0)
            .with_max_iters(20_000);
        let run = ragd_run(&x0, &p, &cfg).unwrap();
        assert!(run.trace.converged);
    }

    #[test]
    fn rnag_constant_on_flat_gradient() {
        // zero gradient and v̄₀ = 0 keep the iterates fixed
        let p = problems::leading_eigenvector(DenseMatrix::<f64>::identity(5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(0.5).with_max_iters(5).with_mu(1.0);
        let c = rnag_c_run(&x0, &p, &cfg).unwrap();
        assert!(c.point.same_point(&x0, 1e-10));
        let sc = rnag_sc_run(&x0, &p, &cfg).unwrap();
        assert!(sc.point.same_point(&x0, 1e-10));
    }

    #[test]
    fn rnag_counts_are_exactly_two_of_each() {
        let p = gen::leading_eigenvector::<f64>(25, 100.0, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(1.0 / p.lipschitz().unwrap()).with_max_iters(30);
        let run = rnag_c_run(&x0, &p, &cfg).unwrap();
        for row in &run.trace.rows {
            assert_eq!(row.counts.exp, 2 * row.iter);
            assert_eq!(row.counts.log, 2 * row.iter);
            assert_eq!(row.counts.transport, 2 * row.iter);
        }
    }

    #[test]
    fn rnag_converges_on_eigvec_instance() {
        let p = gen::leading_eigenvector::<f64>(40, 100.0, 52);
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let x0 = manifold::random_point(p.manifold(), &mut rng);
        let cfg = SolverConfig::new(1.0 / p.lipschitz().unwrap()).with_max_iters(20_000);
        let c = rnag_c_run(&x0, &p, &cfg).unwrap();
        assert!(c.trace.converged);
        let sc = rnag_sc_run(&x0, &p, &cfg.clone().with_mu(10.0)).unwrap();
        assert!(sc.trace.converged);
    }

    /// On SPD(1) the log coordinate is globally flat: exp/log/transport reduce
    /// to scalar shifts. The baselines must match their Euclidean recursions.
    mod flat_equivalence {
        use super::*;

        fn flat_quadratic(h: f64, b: f64) -> problems::Problem<f64> {
            // f(X) = h/2 (ln x - b)^2 on SPD(1); Euclidean gradient h(lnx-b)/x
            let man = Manifold::Spd { dim: 1 };
            problems::Problem::from_euclidean(
                man,
                "flat-quadratic",
                move |x: &ManifoldPoint<f64>| 0.5 * h * (x.value()[(0, 0)].ln() - b).powi(2),
                move |x| {
                    let v = x.value()[(0, 0)];
                    Ok(DenseMatrix::from_vec(1, 1, vec![h * (v.ln() - b) / v]))
                },
            )
        }

        fn spd1(v: f64) -> ManifoldPoint<f64> {
            ManifoldPoint::new(
                Manifold::Spd { dim: 1 },
                DenseMatrix::from_vec(1, 1, vec![v]),
            )
            .unwrap()
        }

        #[test]
        fn ragd_matches_euclidean_recursion() {
            let (hess, b) = (0.8, 0.3);
            let p = flat_quadratic(hess, b);
            let cfg = SolverConfig::new(0.5)
                .with_mu(0.5)
                .with_max_iters(30)
                .with_grad_tol(1e-30);
            let run = ragd_run(&spd1(2.0), &p, &cfg).unwrap();

            // scalar RAGD on xi = ln x with grad = hess*(xi - b)
            let h = cfg.stepsize;
            let beta = (cfg.mu * h).sqrt() / 5.0;
            let disc = (beta * beta + 4.0 * (1.0 + beta) * cfg.mu * h).sqrt();
            let alpha = (disc - beta) / 2.0;
            let gamma = cfg.mu * (disc - beta) / (disc + beta);
            let gamma_bar = (1.0 + beta) * gamma;
            let mut xi = 2.0f64.ln();
            let mut v = xi;
            for _ in 0..run.trace.iterations() {
                let y = xi + alpha * gamma / (gamma + alpha * cfg.mu) * (v - xi);
                let g = hess * (y - b);
                let xi_next = y - h * g;
                v = y + (1.0 - alpha) * gamma / gamma_bar * (v - y) - alpha / gamma_bar * g;
                xi = xi_next;
            }
            assert!((run.point.value()[(0, 0)].ln() - xi).abs() <= 1e-10);
        }

        #[test]
        fn rnag_c_matches_euclidean_recursion() {
            let (hess, b) = (0.8, -0.2);
            let p = flat_quadratic(hess, b);
            let cfg = SolverConfig::new(0.7)
                .with_max_iters(25)
                .with_grad_tol(1e-30);
            let run = rnag_c_run(&spd1(0.5), &p, &cfg).unwrap();

            let (s, xi_p, t_shift) = (cfg.stepsize, cfg.xi, cfg.t_shift);
            let mut x = 0.5f64.ln();
            let mut v_bar = 0.0f64;
            for k in 0..run.trace.iterations() {
                let lambda_k = (k as f64 + 2.0 * xi_p + t_shift) / 2.0;
                let y = x + xi_p / (lambda_k + xi_p - 1.0) * v_bar;
                let g = hess * (y - b);
                let x_next = y - s * g;
                let v_k = v_bar - (y - x);
                let v_mixed = v_k - s * lambda_k / xi_p * g;
                v_bar = v_mixed - (x_next - y);
                x = x_next;
            }
            assert!((run.point.value()[(0, 0)].ln() - x).abs() <= 1e-10);
        }

        #[test]
        fn rnag_sc_matches_euclidean_recursion() {
            let (hess, b) = (1.1, 0.05);
            let p = flat_quadratic(hess, b);
            let cfg = SolverConfig::new(0.6)
                .with_mu(0.9)
                .with_max_iters(25)
                .with_grad_tol(1e-30);
            let run = rnag_sc_run(&spd1(1.7), &p, &cfg).unwrap();

            let s = cfg.stepsize;
            let q = cfg.mu * s;
            let root = q.sqrt(); // xi = 1
            let y_coef = root / (1.0 + root);
            let mix = q.sqrt();
            let mut x = 1.7f64.ln();
            let mut v_bar = 0.0f64;
            for _ in 0..run.trace.iterations() {
                let y = x + y_coef * v_bar;
                let g = hess * (y - b);
                let x_next = y - s * g;
                let v_k = v_bar - (y - x);
                let v_mixed = (1.0 - mix) * v_k - mix / cfg.mu * g;
                v_bar = v_mixed - (x_next - y);
                x = x_next;
            }
            assert!((run.point.value()[(0, 0)].ln() - x).abs() <= 1e-10);
        }
    }
}
