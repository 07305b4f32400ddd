//! Experiment configuration: problem/solver ids, per-problem defaults, and
//! the key = value config-file format (flags override file entries).

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use riemna::accel::{AveragingScheme, LambdaScaling};
use riemna::problems::{gen, Problem};

/// A config error always names the offending field.
#[derive(Debug)]
pub struct ConfigError {
    pub field: &'static str,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn err(field: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        field,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemId {
    Eigvec,
    SpdMean,
    Procrustes,
    Nleig,
}

impl ProblemId {
    pub const ALL: &'static str = "eigvec|spd-mean|procrustes|nleig";

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "eigvec" => Ok(Self::Eigvec),
            "spd-mean" => Ok(Self::SpdMean),
            "procrustes" => Ok(Self::Procrustes),
            "nleig" => Ok(Self::Nleig),
            other => Err(err(
                "problem",
                format!("unknown id '{other}' (expected {})", Self::ALL),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Eigvec => "eigvec",
            Self::SpdMean => "spd-mean",
            Self::Procrustes => "procrustes",
            Self::Nleig => "nleig",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverId {
    Rgd,
    RgdRiemna,
    RiemnaOnline,
    Ragd,
    RnagC,
    RnagSc,
}

impl SolverId {
    pub const ALL: &'static str = "rgd|rgd-riemna|riemna-online|ragd|rnag-c|rnag-sc";

    pub fn parse(s: &str) -> Result<Self, ConfigError> {
        match s {
            "rgd" => Ok(Self::Rgd),
            "rgd-riemna" => Ok(Self::RgdRiemna),
            "riemna-online" => Ok(Self::RiemnaOnline),
            "ragd" => Ok(Self::Ragd),
            "rnag-c" => Ok(Self::RnagC),
            "rnag-sc" => Ok(Self::RnagSc),
            other => Err(err(
                "solver",
                format!("unknown id '{other}' (expected {})", Self::ALL),
            )),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Rgd => "rgd",
            Self::RgdRiemna => "rgd-riemna",
            Self::RiemnaOnline => "riemna-online",
            Self::Ragd => "ragd",
            Self::RnagC => "rnag-c",
            Self::RnagSc => "rnag-sc",
        }
    }
}

fn parse_scheme(s: &str) -> Result<AveragingScheme, ConfigError> {
    match s {
        "recursive" => Ok(AveragingScheme::Recursive),
        "tangent" => Ok(AveragingScheme::TangentAtLast),
        "frechet" => Ok(AveragingScheme::Frechet),
        other => Err(err(
            "scheme",
            format!("unknown scheme '{other}' (expected recursive|tangent|frechet)"),
        )),
    }
}

fn parse_switch(field: &'static str, s: &str) -> Result<bool, ConfigError> {
    match s {
        "on" | "true" | "1" => Ok(true),
        "off" | "false" | "0" => Ok(false),
        other => Err(err(field, format!("expected on|off, got '{other}'"))),
    }
}

/// Raw option bag: every field optional, merged from a config file and CLI
/// flags before resolution against the per-problem defaults.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverlay {
    pub problem: Option<String>,
    pub solver: Option<String>,
    pub dim: Option<usize>,
    pub rank: Option<usize>,
    pub n_matrices: Option<usize>,
    pub cond: Option<f64>,
    pub seed: Option<u64>,
    pub stepsize: Option<f64>,
    pub lambda: Option<f64>,
    pub raw_lambda: Option<String>,
    pub memory: Option<usize>,
    pub scheme: Option<String>,
    pub safeguard: Option<String>,
    pub mu: Option<f64>,
    pub big_l: Option<f64>,
    pub xi: Option<f64>,
    pub t_shift: Option<f64>,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ConfigOverlay {
    /// Parse the key = value file format: one pair per line, `#` comments.
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| err("config", format!("cannot read {}: {e}", path.display())))?;
        let mut entries = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                err(
                    "config",
                    format!("line {}: expected key = value", lineno + 1),
                )
            })?;
            entries.insert(key.trim().replace('_', "-"), value.trim().to_string());
        }
        let mut overlay = Self::default();
        for (key, value) in entries {
            overlay.set(&key, &value)?;
        }
        Ok(overlay)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        fn num<T: std::str::FromStr>(field: &'static str, v: &str) -> Result<T, ConfigError> {
            v.parse()
                .map_err(|_| err(field, format!("cannot parse '{v}'")))
        }
        match key {
            "problem" => self.problem = Some(value.into()),
            "solver" => self.solver = Some(value.into()),
            "dim" => self.dim = Some(num("dim", value)?),
            "rank" => self.rank = Some(num("rank", value)?),
            "n-matrices" => self.n_matrices = Some(num("n-matrices", value)?),
            "cond" => self.cond = Some(num("cond", value)?),
            "seed" => self.seed = Some(num("seed", value)?),
            "stepsize" => self.stepsize = Some(num("stepsize", value)?),
            "lambda" => self.lambda = Some(num("lambda", value)?),
            "raw-lambda" => self.raw_lambda = Some(value.into()),
            "memory" => self.memory = Some(num("memory", value)?),
            "scheme" => self.scheme = Some(value.into()),
            "safeguard" => self.safeguard = Some(value.into()),
            "mu" => self.mu = Some(num("mu", value)?),
            "big-l" => self.big_l = Some(num("big-l", value)?),
            "xi" => self.xi = Some(num("xi", value)?),
            "t-shift" => self.t_shift = Some(num("t-shift", value)?),
            "beta" => self.beta = Some(num("beta", value)?),
            "delta" => self.delta = Some(num("delta", value)?),
            "tol" => self.tol = Some(num("tol", value)?),
            "max-iters" => self.max_iters = Some(num("max-iters", value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => return Err(err("config", format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Later (CLI) values win over earlier (file) ones.
    pub fn merged_over(self, base: Self) -> Self {
        Self {
            problem: self.problem.or(base.problem),
            solver: self.solver.or(base.solver),
            dim: self.dim.or(base.dim),
            rank: self.rank.or(base.rank),
            n_matrices: self.n_matrices.or(base.n_matrices),
            cond: self.cond.or(base.cond),
            seed: self.seed.or(base.seed),
            stepsize: self.stepsize.or(base.stepsize),
            lambda: self.lambda.or(base.lambda),
            raw_lambda: self.raw_lambda.or(base.raw_lambda),
            memory: self.memory.or(base.memory),
            scheme: self.scheme.or(base.scheme),
            safeguard: self.safeguard.or(base.safeguard),
            mu: self.mu.or(base.mu),
            big_l: self.big_l.or(base.big_l),
            xi: self.xi.or(base.xi),
            t_shift: self.t_shift.or(base.t_shift),
            beta: self.beta.or(base.beta),
            delta: self.delta.or(base.delta),
            tol: self.tol.or(base.tol),
            max_iters: self.max_iters.or(base.max_iters),
            out: self.out.or(base.out),
        }
    }
}

/// Fully resolved experiment description.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub problem: ProblemId,
    pub solver: SolverId,
    pub dim: usize,
    pub rank: usize,
    pub n_matrices: usize,
    pub cond: f64,
    pub seed: u64,
    /// `None` means "use the problem's default" (1/L for eigvec).
    pub stepsize: Option<f64>,
    pub grad_tol: f64,
    pub max_iters: usize,
    pub lambda: f64,
    pub lambda_scaling: LambdaScaling,
    pub memory: usize,
    pub scheme: AveragingScheme,
    pub safeguard: bool,
    pub mu: f64,
    pub big_l: Option<f64>,
    pub xi: f64,
    pub t_shift: f64,
    pub beta: Option<f64>,
    pub delta: Option<f64>,
    pub out: PathBuf,
}

/// Benchmark default table per problem: stepsize (None = 1/L), memory depth m, μ.
struct Defaults {
    dim: usize,
    rank: usize,
    n_matrices: usize,
    stepsize: Option<f64>,
    memory: usize,
    mu: f64,
}

fn defaults_for(problem: ProblemId) -> Defaults {
    match problem {
        ProblemId::Eigvec => Defaults {
            dim: 1000,
            rank: 1,
            n_matrices: 1,
            stepsize: None,
            memory: 10,
            mu: 10.0,
        },
        ProblemId::SpdMean => Defaults {
            dim: 10,
            rank: 1,
            n_matrices: 100,
            stepsize: Some(0.5),
            memory: 5,
            mu: 1.0,
        },
        ProblemId::Procrustes => Defaults {
            dim: 100,
            rank: 5,
            n_matrices: 1,
            stepsize: Some(1.0),
            memory: 5,
            mu: 0.005,
        },
        ProblemId::Nleig => Defaults {
            dim: 100,
            rank: 4,
            n_matrices: 1,
            stepsize: Some(0.1),
            memory: 5,
            mu: 5.0,
        },
    }
}

impl ExperimentConfig {
    pub fn resolve(overlay: ConfigOverlay) -> Result<Self, ConfigError> {
        let problem = ProblemId::parse(overlay.problem.as_deref().ok_or_else(|| {
            err(
                "problem",
                "missing (one of eigvec|spd-mean|procrustes|nleig)",
            )
        })?)?;
        let solver = SolverId::parse(overlay.solver.as_deref().ok_or_else(|| {
            err(
                "solver",
                "missing (one of rgd|rgd-riemna|riemna-online|ragd|rnag-c|rnag-sc)",
            )
        })?)?;
        let d = defaults_for(problem);

        let cfg = Self {
            problem,
            solver,
            dim: overlay.dim.unwrap_or(d.dim),
            rank: overlay.rank.unwrap_or(d.rank),
            n_matrices: overlay.n_matrices.unwrap_or(d.n_matrices),
            cond: overlay.cond.unwrap_or(1e3),
            seed: overlay.seed.unwrap_or(0),
            stepsize: overlay
                .stepsize
                .or(overlay.big_l.map(|l| 1.0 / l))
                .or(d.stepsize),
            grad_tol: overlay.tol.unwrap_or(1e-6),
            max_iters: overlay.max_iters.unwrap_or(50_000),
            lambda: overlay.lambda.unwrap_or(1e-8),
            lambda_scaling: match overlay.raw_lambda.as_deref() {
                Some(v) if parse_switch("raw-lambda", v)? => LambdaScaling::Raw,
                _ => LambdaScaling::Relative,
            },
            memory: overlay.memory.unwrap_or(d.memory),
            scheme: overlay
                .scheme
                .as_deref()
                .map(parse_scheme)
                .transpose()?
                .unwrap_or_default(),
            safeguard: match overlay.safeguard.as_deref() {
                Some(v) => parse_switch("safeguard", v)?,
                None => true,
            },
            mu: overlay.mu.unwrap_or(d.mu),
            big_l: overlay.big_l,
            xi: overlay.xi.unwrap_or(1.0),
            t_shift: overlay.t_shift.unwrap_or(1.0),
            beta: overlay.beta,
            delta: overlay.delta,
            out: overlay.out.unwrap_or_else(|| PathBuf::from("run.csv")),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        if self.dim < 2 {
            return Err(err("dim", "must be at least 2"));
        }
        if self.rank == 0 || self.rank > self.dim {
            return Err(err(
                "rank",
                format!("must be in 1..=dim (got {})", self.rank),
            ));
        }
        if self.n_matrices == 0 {
            return Err(err("n-matrices", "must be positive"));
        }
        if let Some(s) = self.stepsize {
            if !(s > 0.0 && s.is_finite()) {
                return Err(err("stepsize", "must be positive and finite"));
            }
        }
        if self.grad_tol.is_nan() || self.grad_tol <= 0.0 {
            return Err(err("tol", "must be positive"));
        }
        if self.lambda < 0.0 {
            return Err(err("lambda", "must be non-negative"));
        }
        if self.memory < 2 {
            return Err(err("memory", "must be at least 2"));
        }
        if self.cond < 1.0 {
            return Err(err("cond", "must be at least 1"));
        }
        if matches!(self.solver, SolverId::Ragd | SolverId::RnagSc)
            && (self.mu.is_nan() || self.mu <= 0.0)
        {
            return Err(err("mu", "must be positive for ragd/rnag-sc"));
        }
        if self.xi < 1.0 {
            return Err(err("xi", "must be at least 1"));
        }
        if let Some(d) = self.delta {
            if d.is_nan() || d <= 0.0 {
                return Err(err("delta", "must be positive"));
            }
        }
        Ok(())
    }

    /// Serialize in the config-file format; `resolve` on the parsed result
    /// reproduces this config.
    pub fn file_format(&self) -> String {
        let scheme = match self.scheme {
            AveragingScheme::Recursive => "recursive",
            AveragingScheme::TangentAtLast => "tangent",
            AveragingScheme::Frechet => "frechet",
        };
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k} = {v}\n"));
        line("problem", self.problem.name().into());
        line("solver", self.solver.name().into());
        line("dim", self.dim.to_string());
        line("rank", self.rank.to_string());
        line("n-matrices", self.n_matrices.to_string());
        line("cond", format!("{:e}", self.cond));
        line("seed", self.seed.to_string());
        if let Some(s) = self.stepsize {
            line("stepsize", format!("{s:e}"));
        }
        line("tol", format!("{:e}", self.grad_tol));
        line("max-iters", self.max_iters.to_string());
        line("lambda", format!("{:e}", self.lambda));
        line(
            "raw-lambda",
            if self.lambda_scaling == LambdaScaling::Raw {
                "on"
            } else {
                "off"
            }
            .into(),
        );
        line("memory", self.memory.to_string());
        line("scheme", scheme.into());
        line(
            "safeguard",
            if self.safeguard { "on" } else { "off" }.into(),
        );
        line("mu", format!("{:e}", self.mu));
        if let Some(l) = self.big_l {
            line("big-l", format!("{l:e}"));
        }
        line("xi", format!("{:e}", self.xi));
        line("t-shift", format!("{:e}", self.t_shift));
        if let Some(b) = self.beta {
            line("beta", format!("{b:e}"));
        }
        if let Some(d) = self.delta {
            line("delta", format!("{d:e}"));
        }
        line("out", self.out.display().to_string());
        out
    }

    /// Instantiate the problem from the generator parameters.
    pub fn build_problem(&self) -> Problem<f64> {
        match self.problem {
            ProblemId::Eigvec => gen::leading_eigenvector(self.dim, self.cond, self.seed),
            ProblemId::SpdMean => gen::spd_frechet_mean(self.dim, self.n_matrices, self.seed),
            ProblemId::Procrustes => gen::procrustes(self.dim, self.rank, self.seed),
            ProblemId::Nleig => gen::nonlinear_eigenspace(self.dim, self.rank),
        }
    }

    /// The stepsize actually used: explicit, or 1/L when the problem knows
    /// its Lipschitz constant, or the tuned benchmark default.
    pub fn effective_stepsize(&self, problem: &Problem<f64>) -> Result<f64, ConfigError> {
        if let Some(s) = self.stepsize {
            return Ok(s);
        }
        match problem.lipschitz() {
            Some(l) if l > 0.0 => Ok(1.0 / l),
            _ => Err(err(
                "stepsize",
                "no default available for this problem; pass --stepsize or --big-l",
            )),
        }
    }
}
