//! Execute experiments, write CSV traces, and drive parameter sweeps.
//!
//! CSV schema (one row per recorded iterate, floats at 17 significant
//! digits):
//!
//! ```text
//! iter,seconds,objective,grad_norm,gap,n_exp,n_log,n_retract,n_inv_retract,n_transport
//! ```
//!
//! `gap` is objective minus the oracle optimum when one exists, else blank.
//! Identical config + seed reproduce the file byte for byte except the
//! seconds column. I/O is buffered and flushed once at the end so timing
//! stays clean.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use riemna::accel::{rgd_riemna_run, riemna_online_run, RiemnaConfig};
use riemna::manifold;
use riemna::problems::Problem;
use riemna::solvers::{
    ragd_run, rgd_run, rnag_c_run, rnag_sc_run, RunResult, SolverConfig, SolverTrace,
};

use crate::config::{ConfigError, ExperimentConfig, SolverId};

pub const CSV_HEADER: &str =
    "iter,seconds,objective,grad_norm,gap,n_exp,n_log,n_retract,n_inv_retract,n_transport";

/// How a run ended; maps onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Converged,
    MaxIters,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Converged => 0,
            RunStatus::MaxIters => 2,
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Solver(riemna::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Solver(e) => write!(f, "{e}"),
            RunError::Io(e) => write!(f, "io: {e}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        Self::Config(e)
    }
}

impl From<riemna::Error> for RunError {
    fn from(e: riemna::Error) -> Self {
        Self::Solver(e)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

pub struct RunOutput {
    pub status: RunStatus,
    pub trace: SolverTrace,
    pub csv_path: PathBuf,
    pub summary: serde_json::Value,
}

/// Deterministic starting point: a dedicated stream derived from the seed so
/// problem generation and initialization stay independent.
fn initial_point(problem: &Problem<f64>, seed: u64) -> riemna::Point64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5851_f42d_4c95_7f2d);
    manifold::random_point(problem.manifold(), &mut rng)
}

fn solver_config(cfg: &ExperimentConfig, stepsize: f64) -> SolverConfig<f64> {
    let mut sc = SolverConfig::new(stepsize)
        .with_grad_tol(cfg.grad_tol)
        .with_max_iters(cfg.max_iters)
        .with_mu(cfg.mu)
        .with_xi(cfg.xi)
        .with_t_shift(cfg.t_shift);
    if let Some(beta) = cfg.beta {
        sc = sc.with_beta(beta);
    }
    sc
}

fn accel_config(cfg: &ExperimentConfig, stepsize: f64) -> RiemnaConfig<f64> {
    RiemnaConfig::default()
        .with_lambda(cfg.lambda)
        .with_lambda_scaling(cfg.lambda_scaling)
        .with_memory(cfg.memory)
        .with_scheme(cfg.scheme)
        .with_safeguard(cfg.safeguard)
        .with_delta(cfg.delta.unwrap_or(stepsize))
}

/// Execute the configured run and write its CSV trace.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput, RunError> {
    let problem = cfg.build_problem();
    let stepsize = cfg.effective_stepsize(&problem)?;
    let x0 = initial_point(&problem, cfg.seed);
    let solver = solver_config(cfg, stepsize);

    let result: RunResult<f64> = match cfg.solver {
        SolverId::Rgd => rgd_run(&x0, &problem, &solver)?,
        SolverId::Ragd => ragd_run(&x0, &problem, &solver)?,
        SolverId::RnagC => rnag_c_run(&x0, &problem, &solver)?,
        SolverId::RnagSc => rnag_sc_run(&x0, &problem, &solver)?,
        SolverId::RgdRiemna => {
            rgd_riemna_run(&x0, &problem, &solver, &accel_config(cfg, stepsize))?
        }
        SolverId::RiemnaOnline => {
            riemna_online_run(&x0, &problem, &solver, &accel_config(cfg, stepsize))?
        }
    };

    write_csv(&cfg.out, &result.trace, problem.optimum_value())?;

    let status = if result.trace.converged {
        RunStatus::Converged
    } else {
        RunStatus::MaxIters
    };
    let summary = serde_json::json!({
        "problem": cfg.problem.name(),
        "solver": cfg.solver.name(),
        "final_objective": result.trace.final_objective(),
        "final_grad_norm": result.trace.final_grad_norm(),
        "iterations": result.trace.iterations(),
        "seconds": result.trace.final_seconds(),
        "converged": result.trace.converged,
        "out": cfg.out.display().to_string(),
    });
    Ok(RunOutput {
        status,
        trace: result.trace,
        csv_path: cfg.out.clone(),
        summary,
    })
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_csv(path: &Path, trace: &SolverTrace, optimum: Option<f64>) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "{CSV_HEADER}")?;
    for row in &trace.rows {
        let gap = optimum
            .map(|f| fmt17(row.objective - f))
            .unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            row.iter,
            fmt17(row.seconds),
            fmt17(row.objective),
            fmt17(row.grad_norm),
            gap,
            row.counts.exp,
            row.counts.log,
            row.counts.retract,
            row.counts.inv_retract,
            row.counts.transport,
        )?;
    }
    w.flush()
}

/// Parameters the sweep driver can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Lambda,
    Memory,
    Stepsize,
    Seed,
}

impl SweepParam {
    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "lambda" => Ok(Self::Lambda),
            "memory" => Ok(Self::Memory),
            "stepsize" => Ok(Self::Stepsize),
            "seed" => Ok(Self::Seed),
            other => Err(ConfigError {
                field: "vary",
                message: format!(
                    "parameter '{other}' is not sweepable (expected lambda|memory|stepsize|seed)"
                ),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Lambda => "lambda",
            Self::Memory => "memory",
            Self::Stepsize => "stepsize",
            Self::Seed => "seed",
        }
    }
}

pub struct SweepOutput {
    pub index_path: PathBuf,
    pub runs: Vec<(String, Result<RunOutput, RunError>)>,
}

/// Run the base config once per value of the varied parameter. Each run
/// writes `<stem>_<param>=<value>.csv`; the index file collects summary
/// statistics for all of them.
pub fn sweep(
    base: &ExperimentConfig,
    param: SweepParam,
    values: &[String],
) -> Result<SweepOutput, RunError> {
    let stem = base.out.with_extension("");
    let index_path = PathBuf::from(format!("{}_index.csv", stem.display()));

    let mut runs = Vec::new();
    for value in values {
        let mut cfg = base.clone();
        match param {
            SweepParam::Lambda => {
                cfg.lambda = value.parse().map_err(|_| ConfigError {
                    field: "values",
                    message: format!("cannot parse '{value}' as lambda"),
                })?
            }
            SweepParam::Memory => {
                cfg.memory = value.parse().map_err(|_| ConfigError {
                    field: "values",
                    message: format!("cannot parse '{value}' as memory"),
                })?
            }
            SweepParam::Stepsize => {
                cfg.stepsize = Some(value.parse().map_err(|_| ConfigError {
                    field: "values",
                    message: format!("cannot parse '{value}' as stepsize"),
                })?)
            }
            SweepParam::Seed => {
                cfg.seed = value.parse().map_err(|_| ConfigError {
                    field: "values",
                    message: format!("cannot parse '{value}' as seed"),
                })?
            }
        }
        cfg.out = PathBuf::from(format!("{}_{}={}.csv", stem.display(), param.name(), value));
        let outcome = run(&cfg);
        runs.push((value.clone(), outcome));
    }

    if let Some(parent) = index_path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut w = BufWriter::new(File::create(&index_path)?);
    writeln!(
        w,
        "param,value,file,converged,iterations,final_objective,final_grad_norm,seconds"
    )?;
    for (value, outcome) in &runs {
        match outcome {
            Ok(out) => writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                param.name(),
                value,
                out.csv_path.display(),
                out.trace.converged,
                out.trace.iterations(),
                fmt17(out.trace.final_objective()),
                fmt17(out.trace.final_grad_norm()),
                fmt17(out.trace.final_seconds()),
            )?,
            Err(e) => writeln!(w, "{},{},error,false,0,,,{}", param.name(), value, e)?,
        }
    }
    w.flush()?;
    Ok(SweepOutput { index_path, runs })
}
