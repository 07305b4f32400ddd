//! Benchmark CLI: configure, run, time, and record experiments.
//!
//! Subcommands: `run` (one experiment → one CSV), `sweep` (one CSV per value
//! of a varied parameter plus an index file), `selftest` (the acceptance
//! suite). Exit codes: 0 converged / all passed, 1 error, 2 max-iters
//! exhausted.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use riemna_bench::acceptance;
use riemna_bench::config::{ConfigOverlay, ExperimentConfig};
use riemna_bench::runner::{self, SweepParam};

#[derive(Parser)]
#[command(
    name = "riemna-bench",
    version,
    about = "Riemannian optimization benchmarks with extrapolation acceleration"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV trace.
    Run(RunArgs),
    /// Run the base experiment once per value of a swept parameter.
    Sweep(SweepArgs),
    /// Execute the acceptance suite (one pass/fail line per criterion).
    Selftest,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Problem id: eigvec|spd-mean|procrustes|nleig.
    #[arg(long)]
    problem: Option<String>,
    /// Solver id: rgd|rgd-riemna|riemna-online|ragd|rnag-c|rnag-sc.
    #[arg(long)]
    solver: Option<String>,
    /// Ambient dimension (d for eigvec/spd-mean, p for procrustes/nleig).
    #[arg(long)]
    dim: Option<usize>,
    /// Column count r for Stiefel/Grassmann problems.
    #[arg(long)]
    rank: Option<usize>,
    /// Number of SPD matrices N for spd-mean.
    #[arg(long = "n-matrices")]
    n_matrices: Option<usize>,
    /// Condition number of the eigvec spectrum.
    #[arg(long)]
    cond: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Fixed stepsize; defaults to 1/L (eigvec) or the tuned per-problem value.
    #[arg(long)]
    stepsize: Option<f64>,
    /// Extrapolation regularization.
    #[arg(long)]
    lambda: Option<f64>,
    /// on|off: apply lambda to the raw Gram instead of scaling by its norm.
    #[arg(long = "raw-lambda")]
    raw_lambda: Option<String>,
    /// Memory depth m.
    #[arg(long)]
    memory: Option<usize>,
    /// Averaging scheme: recursive|tangent|frechet.
    #[arg(long)]
    scheme: Option<String>,
    /// on|off: reject extrapolations that increase the epoch-best objective.
    #[arg(long)]
    safeguard: Option<String>,
    #[arg(long)]
    mu: Option<f64>,
    /// Known gradient-Lipschitz constant (stepsize defaults to 1/L).
    #[arg(long = "big-l")]
    big_l: Option<f64>,
    #[arg(long)]
    xi: Option<f64>,
    #[arg(long = "t-shift")]
    t_shift: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Online mixing parameter.
    #[arg(long)]
    delta: Option<f64>,
    /// Gradient-norm stopping tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long = "max-iters")]
    max_iters: Option<usize>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Config file (key = value per line); flags override file entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    base: RunArgs,
    /// Parameter to vary: lambda|memory|stepsize|seed.
    #[arg(long)]
    vary: String,
    /// Comma-separated values for the varied parameter.
    #[arg(long, value_delimiter = ',')]
    values: Vec<String>,
}

impl RunArgs {
    fn overlay(&self) -> ConfigOverlay {
        ConfigOverlay {
            problem: self.problem.clone(),
            solver: self.solver.clone(),
            dim: self.dim,
            rank: self.rank,
            n_matrices: self.n_matrices,
            cond: self.cond,
            seed: self.seed,
            stepsize: self.stepsize,
            lambda: self.lambda,
            raw_lambda: self.raw_lambda.clone(),
            memory: self.memory,
            scheme: self.scheme.clone(),
            safeguard: self.safeguard.clone(),
            mu: self.mu,
            big_l: self.big_l,
            xi: self.xi,
            t_shift: self.t_shift,
            beta: self.beta,
            delta: self.delta,
            tol: self.tol,
            max_iters: self.max_iters,
            out: self.out.clone(),
        }
    }

    fn resolve(&self) -> Result<ExperimentConfig, String> {
        let flags = self.overlay();
        let merged = match &self.config {
            Some(path) => {
                let file = ConfigOverlay::from_file(path).map_err(|e| e.to_string())?;
                flags.merged_over(file)
            }
            None => flags,
        };
        ExperimentConfig::resolve(merged).map_err(|e| e.to_string())
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => match args.resolve() {
            Ok(cfg) => match runner::run(&cfg) {
                Ok(out) => {
                    println!("{}", out.summary);
                    ExitCode::from(out.status.exit_code() as u8)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            },
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Sweep(args) => {
            let cfg = match args.base.resolve() {
                Ok(cfg) => cfg,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let param = match SweepParam::parse(&args.vary) {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            let values: Vec<String> = args.values.into_iter().filter(|v| !v.is_empty()).collect();
            match runner::sweep(&cfg, param, &values) {
                Ok(out) => {
                    for (value, run) in &out.runs {
                        match run {
                            Ok(r) => println!("{}", r.summary),
                            Err(e) => eprintln!("error ({}={value}): {e}", param.name()),
                        }
                    }
                    println!(
                        "{}",
                        serde_json::json!({
                            "sweep": param.name(),
                            "runs": out.runs.len(),
                            "index": out.index_path.display().to_string(),
                        })
                    );
                    if out.runs.iter().any(|(_, r)| r.is_err()) {
                        ExitCode::from(1)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
            }
        }
        Command::Selftest => {
            let results = acceptance::run_all();
            let mut all_ok = true;
            for c in &results {
                all_ok &= c.passed;
                println!(
                    "{}  {} — {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
