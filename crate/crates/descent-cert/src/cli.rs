//! Command-line front end: a flat key-value config format, CSV trace
//! emission, and human-readable summaries.
//!
//! # Config format
//!
//! One `key = value` pair per line. A section header `[name]` prefixes
//! the keys that follow (`kind` under `[method]` means `method.kind`);
//! fully qualified keys like `method.kind = gradient` work without
//! sections. Lines starting with `#` are comments. No nesting.
//!
//! ```text
//! [objective]
//! kind = worstcase        # worstcase | quadratic | softplus | random
//! dim = 2
//! mu = 1.0
//! L = 3.0
//! # explicit quadratics: q = 2 1 ; 1 2   and optionally b = 0 0
//! # softplus extras:     terms = 4
//!
//! [method]
//! kind = gradient         # gradient | variable-metric | gradient-related
//!                         # | relaxed | inexact | exact-line-search
//! h = hbar                # a number, or "hbar" for the certified maximum
//! # variable-metric:      a = 1 0 ; 0 2     or  a_diag = 1 2
//! # gradient-related:     theta_deg = 30 (or cos_theta = ...), c = 1
//! # relaxed:              theta_deg = 30, c1 = 0.5, c2 = 2
//! # inexact:              epsilon = 0.5
//! # exact-line-search:    theta_deg = 30
//!
//! [run]
//! iters = 20
//! trials = 100
//! seed = 42
//! grid = 25               # sweep only
//! # out = trace.csv
//! # x0 = 1 1              or  x0 = witness
//! ```
//!
//! `worst-case` runs read `suite.which` (default `all`); `min-cond`
//! reads `oracle.theta_deg` (or `oracle.cos_theta`), `oracle.trials`
//! and `oracle.seed`.
//!
//! # CSV schema
//!
//! `iter,h,gap_before,gap_after,observed_ratio,bound,data_bound,verdict`
//! with one row per certificate. Reals are printed with 17 significant
//! digits, optional fields are left empty, and output bytes are a pure
//! function of the report, so a fixed config and seed reproduce the
//! file exactly.

use crate::certify::{
    certify_run, certify_trials, eigenvector_equality_check, sweep_step_sizes, tightness_suite,
    RunReport, SpectrumEnd, StepCertificate, TightnessCase, Verdict,
};
use crate::descent::{plan_for, Method, StepPlan};
use crate::error::{Error, Result};
use crate::linalg::{random_gaussian_vector, symmetric_eigen, SpdMatrix, SymMatrix, Vector};
use crate::metric::{min_condition_oracle, sr1_metric, AngleWitness};
use crate::objective::{Objective, QuadraticSpec};
use crate::seed::{rng_for, STREAM_START};

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Certify,
    Sweep,
    WorstCase,
    MinCond,
}

impl Command {
    pub fn parse(name: &str) -> Option<Command> {
        match name {
            "run" => Some(Command::Run),
            "certify" => Some(Command::Certify),
            "sweep" => Some(Command::Sweep),
            "worst-case" => Some(Command::WorstCase),
            "min-cond" => Some(Command::MinCond),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Certify => "certify",
            Command::Sweep => "sweep",
            Command::WorstCase => "worst-case",
            Command::MinCond => "min-cond",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepChoice {
    /// The certified maximum, resolved once the plan is built.
    HBar,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpecCfg {
    WorstCase { mu: f64, lipschitz: f64, dim: usize },
    Explicit { q: Vec<Vec<f64>>, b: Option<Vec<f64>> },
    Softplus { mu: f64, dim: usize, terms: usize },
    Random { mu: f64, lipschitz: f64, dim: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum MethodSpecCfg {
    Gradient,
    VariableMetric {
        rows: Option<Vec<Vec<f64>>>,
        diag: Option<Vec<f64>>,
    },
    GradientRelated {
        cos_theta: f64,
        c: f64,
    },
    Relaxed {
        cos_theta_bound: f64,
        c1: f64,
        c2: f64,
    },
    Inexact {
        epsilon: f64,
    },
    ExactLineSearch {
        cos_theta: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum StartSpec {
    /// Seeded random start around the minimizer.
    Random,
    /// The worst-case witness point.
    Witness,
    Point(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteSpec {
    All,
    One(TightnessCase),
}

/// A fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub objective: Option<ObjectiveSpecCfg>,
    pub method: Option<MethodSpecCfg>,
    pub step: StepChoice,
    pub x0: StartSpec,
    pub iters: usize,
    pub trials: usize,
    pub grid: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub allow_uncertified: bool,
    pub suite: SuiteSpec,
    pub oracle_cos_theta: Option<f64>,
    pub oracle_trials: usize,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_ITERS: usize = 20;
pub const DEFAULT_GRID: usize = 25;
pub const DEFAULT_ORACLE_TRIALS: usize = 200_000;

struct KeyReader {
    entries: BTreeMap<String, (String, usize)>,
}

impl KeyReader {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or(Error::Config {
                    line: line_no,
                    message: format!("malformed section header `{line}`"),
                })?;
                section = name.trim().to_ascii_lowercase();
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(Error::Config {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_ascii_lowercase();
            let full = if key.contains('.') || section.is_empty() {
                key
            } else {
                format!("{section}.{key}")
            };
            if entries
                .insert(full.clone(), (value.trim().to_string(), line_no))
                .is_some()
            {
                return Err(Error::Config {
                    line: line_no,
                    message: format!("duplicate key `{full}`"),
                });
            }
        }
        Ok(Self { entries })
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn finish(self, command: Command) -> Result<()> {
        if let Some((key, (_, line))) = self.entries.into_iter().next() {
            return Err(Error::Config {
                line,
                message: format!(
                    "unknown key `{key}` for command `{}`",
                    command.name()
                ),
            });
        }
        Ok(())
    }
}

fn bad_value(key: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: format!("key `{key}`: {}", message.into()),
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| bad_value(key, line, format!("not a number: `{value}`")))
}

fn parse_usize(key: &str, value: &str, line: usize) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| bad_value(key, line, format!("not a nonnegative integer: `{value}`")))
}

fn parse_list(key: &str, value: &str, line: usize) -> Result<Vec<f64>> {
    let items: Vec<&str> = value
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(bad_value(key, line, "empty list"));
    }
    items
        .into_iter()
        .map(|s| parse_f64(key, s, line))
        .collect()
}

fn parse_matrix(key: &str, value: &str, line: usize) -> Result<Vec<Vec<f64>>> {
    value
        .split(';')
        .map(|row| parse_list(key, row, line))
        .collect()
}

/// Parses and validates a config for the given command. Every key is
/// checked against the command's schema; violations carry the key name
/// and its line.
pub fn parse_config(text: &str, command: Command) -> Result<RunConfig> {
    let mut keys = KeyReader::parse(text)?;

    let mut config = RunConfig {
        command,
        objective: None,
        method: None,
        step: StepChoice::HBar,
        x0: StartSpec::Random,
        iters: DEFAULT_ITERS,
        trials: DEFAULT_TRIALS,
        grid: DEFAULT_GRID,
        seed: DEFAULT_SEED,
        out: None,
        allow_uncertified: false,
        suite: SuiteSpec::All,
        oracle_cos_theta: None,
        oracle_trials: DEFAULT_ORACLE_TRIALS,
    };

    match command {
        Command::Run | Command::Certify | Command::Sweep => {
            config.objective = Some(read_objective(&mut keys)?);
            config.method = Some(read_method(&mut keys, &mut config.step)?);
            read_run_section(&mut keys, &mut config)?;
        }
        Command::WorstCase => {
            if let Some((value, line)) = keys.take("suite.which") {
                config.suite = match value.as_str() {
                    "all" => SuiteSpec::All,
                    "gradient" => SuiteSpec::One(TightnessCase::GradientWitness),
                    "variable-metric" => SuiteSpec::One(TightnessCase::VariableMetricWitness),
                    "inexact" => SuiteSpec::One(TightnessCase::InexactSharp),
                    "angle-els" => SuiteSpec::One(TightnessCase::AngleExactLineSearch),
                    other => {
                        return Err(bad_value(
                            "suite.which",
                            line,
                            format!(
                                "unknown case `{other}` (expected all, gradient, \
                                 variable-metric, inexact, angle-els)"
                            ),
                        ))
                    }
                };
            }
            if let Some((value, line)) = keys.take("run.out") {
                config.out = Some(PathBuf::from(check_nonempty("run.out", &value, line)?));
            }
        }
        Command::MinCond => {
            let theta = keys.take("oracle.theta_deg");
            let cos = keys.take("oracle.cos_theta");
            config.oracle_cos_theta = Some(resolve_angle(
                "oracle.theta_deg",
                "oracle.cos_theta",
                theta,
                cos,
            )?
            .ok_or_else(|| {
                Error::param(
                    "oracle.theta_deg",
                    "min-cond needs `oracle.theta_deg` or `oracle.cos_theta`",
                )
            })?);
            if let Some((value, line)) = keys.take("oracle.trials") {
                config.oracle_trials = parse_usize("oracle.trials", &value, line)?;
                if config.oracle_trials == 0 {
                    return Err(bad_value("oracle.trials", line, "must be >= 1"));
                }
            }
            if let Some((value, line)) = keys.take("oracle.seed") {
                config.seed = value
                    .parse::<u64>()
                    .map_err(|_| bad_value("oracle.seed", line, "not an integer"))?;
            }
        }
    }

    keys.finish(command)?;
    Ok(config)
}

fn check_nonempty<'v>(key: &str, value: &'v str, line: usize) -> Result<&'v str> {
    if value.is_empty() {
        return Err(bad_value(key, line, "empty value"));
    }
    Ok(value)
}

/// Turns `theta_deg` / `cos_theta` (at most one of them) into a cosine.
fn resolve_angle(
    deg_key: &'static str,
    cos_key: &'static str,
    deg: Option<(String, usize)>,
    cos: Option<(String, usize)>,
) -> Result<Option<f64>> {
    match (deg, cos) {
        (Some(_), Some((_, line))) => Err(bad_value(
            cos_key,
            line,
            format!("give either `{deg_key}` or `{cos_key}`, not both"),
        )),
        (Some((value, line)), None) => {
            let degrees = parse_f64(deg_key, &value, line)?;
            if !(0.0..90.0).contains(&degrees) {
                return Err(bad_value(
                    deg_key,
                    line,
                    format!("need an angle in [0, 90) degrees, got {degrees}"),
                ));
            }
            Ok(Some(degrees.to_radians().cos().min(1.0)))
        }
        (None, Some((value, line))) => {
            let c = parse_f64(cos_key, &value, line)?;
            if !(c > 0.0 && c <= 1.0) {
                return Err(bad_value(
                    cos_key,
                    line,
                    format!("need a cosine in (0, 1], got {c}"),
                ));
            }
            Ok(Some(c))
        }
        (None, None) => Ok(None),
    }
}

fn read_objective(keys: &mut KeyReader) -> Result<ObjectiveSpecCfg> {
    let (kind, kind_line) = keys
        .take("objective.kind")
        .ok_or_else(|| Error::param("objective.kind", "missing required key"))?;
    let mu = keys.take("objective.mu");
    let lipschitz = keys.take("objective.l");
    let dim = keys.take("objective.dim");
    let q = keys.take("objective.q");
    let b = keys.take("objective.b");
    let terms = keys.take("objective.terms");

    let need_mu = |v: Option<(String, usize)>| -> Result<f64> {
        let (value, line) =
            v.ok_or_else(|| Error::param("objective.mu", "missing required key"))?;
        let mu = parse_f64("objective.mu", &value, line)?;
        if !(mu > 0.0) {
            return Err(bad_value("objective.mu", line, format!("need mu > 0, got {mu}")));
        }
        Ok(mu)
    };
    let need_dim = |v: Option<(String, usize)>, min: usize| -> Result<usize> {
        let (value, line) =
            v.ok_or_else(|| Error::param("objective.dim", "missing required key"))?;
        let dim = parse_usize("objective.dim", &value, line)?;
        if dim < min {
            return Err(bad_value(
                "objective.dim",
                line,
                format!("need dim >= {min}, got {dim}"),
            ));
        }
        Ok(dim)
    };
    let need_l = |v: Option<(String, usize)>, mu: f64| -> Result<f64> {
        let (value, line) = v.ok_or_else(|| Error::param("objective.L", "missing required key"))?;
        let l = parse_f64("objective.L", &value, line)?;
        if !(l >= mu) {
            return Err(bad_value(
                "objective.L",
                line,
                format!("need L >= mu = {mu}, got {l}"),
            ));
        }
        Ok(l)
    };

    match kind.as_str() {
        "worstcase" => {
            let mu = need_mu(mu)?;
            Ok(ObjectiveSpecCfg::WorstCase {
                mu,
                lipschitz: need_l(lipschitz, mu)?,
                dim: need_dim(dim, 2)?,
            })
        }
        "random" => {
            let mu = need_mu(mu)?;
            Ok(ObjectiveSpecCfg::Random {
                mu,
                lipschitz: need_l(lipschitz, mu)?,
                dim: need_dim(dim, 1)?,
            })
        }
        "softplus" => {
            let terms = match terms {
                Some((value, line)) => parse_usize("objective.terms", &value, line)?,
                None => 4,
            };
            Ok(ObjectiveSpecCfg::Softplus {
                mu: need_mu(mu)?,
                dim: need_dim(dim, 1)?,
                terms,
            })
        }
        "quadratic" => {
            let (value, line) = q.ok_or_else(|| {
                Error::param("objective.q", "explicit quadratic needs `q` rows")
            })?;
            let rows = parse_matrix("objective.q", &value, line)?;
            let b = match b {
                Some((value, line)) => Some(parse_list("objective.b", &value, line)?),
                None => None,
            };
            Ok(ObjectiveSpecCfg::Explicit { q: rows, b })
        }
        other => Err(bad_value(
            "objective.kind",
            kind_line,
            format!("unknown kind `{other}` (expected worstcase, quadratic, softplus, random)"),
        )),
    }
}

fn read_method(keys: &mut KeyReader, step: &mut StepChoice) -> Result<MethodSpecCfg> {
    let (kind, kind_line) = keys
        .take("method.kind")
        .ok_or_else(|| Error::param("method.kind", "missing required key"))?;

    if let Some((value, line)) = keys.take("method.h") {
        *step = if value == "hbar" {
            StepChoice::HBar
        } else {
            let h = parse_f64("method.h", &value, line)?;
            if !(h >= 0.0) {
                return Err(bad_value("method.h", line, format!("need h >= 0, got {h}")));
            }
            StepChoice::Fixed(h)
        };
    }

    let angle = resolve_angle(
        "method.theta_deg",
        "method.cos_theta",
        keys.take("method.theta_deg"),
        keys.take("method.cos_theta"),
    )?;

    match kind.as_str() {
        "gradient" => Ok(MethodSpecCfg::Gradient),
        "variable-metric" => {
            let rows = match keys.take("method.a") {
                Some((value, line)) => Some(parse_matrix("method.a", &value, line)?),
                None => None,
            };
            let diag = match keys.take("method.a_diag") {
                Some((value, line)) => Some(parse_list("method.a_diag", &value, line)?),
                None => None,
            };
            if rows.is_some() == diag.is_some() {
                return Err(Error::param(
                    "method.a",
                    "variable-metric needs exactly one of `a` or `a_diag`",
                ));
            }
            Ok(MethodSpecCfg::VariableMetric { rows, diag })
        }
        "gradient-related" => {
            let cos_theta = angle.ok_or_else(|| {
                Error::param("method.theta_deg", "gradient-related needs an angle")
            })?;
            let c = match keys.take("method.c") {
                Some((value, line)) => {
                    let c = parse_f64("method.c", &value, line)?;
                    if !(c > 0.0) {
                        return Err(bad_value("method.c", line, format!("need c > 0, got {c}")));
                    }
                    c
                }
                None => 1.0,
            };
            Ok(MethodSpecCfg::GradientRelated { cos_theta, c })
        }
        "relaxed" => {
            let cos_theta_bound = angle.ok_or_else(|| {
                Error::param("method.theta_deg", "relaxed needs an angle bound")
            })?;
            let (c1_value, c1_line) = keys
                .take("method.c1")
                .ok_or_else(|| Error::param("method.c1", "missing required key"))?;
            let c1 = parse_f64("method.c1", &c1_value, c1_line)?;
            let (c2_value, c2_line) = keys
                .take("method.c2")
                .ok_or_else(|| Error::param("method.c2", "missing required key"))?;
            let c2 = parse_f64("method.c2", &c2_value, c2_line)?;
            if !(c1 > 0.0) {
                return Err(bad_value("method.c1", c1_line, format!("need c1 > 0, got {c1}")));
            }
            if c1 > c2 {
                return Err(bad_value(
                    "method.c1",
                    c2_line,
                    format!("c1 exceeds c2: {c1} > {c2}"),
                ));
            }
            Ok(MethodSpecCfg::Relaxed {
                cos_theta_bound,
                c1,
                c2,
            })
        }
        "inexact" => {
            let (value, line) = keys
                .take("method.epsilon")
                .ok_or_else(|| Error::param("method.epsilon", "missing required key"))?;
            let epsilon = parse_f64("method.epsilon", &value, line)?;
            if !(0.0..1.0).contains(&epsilon) {
                return Err(bad_value(
                    "method.epsilon",
                    line,
                    format!("admissible range is [0, 1), got {epsilon}"),
                ));
            }
            Ok(MethodSpecCfg::Inexact { epsilon })
        }
        "exact-line-search" => {
            let cos_theta = angle.unwrap_or(1.0);
            Ok(MethodSpecCfg::ExactLineSearch { cos_theta })
        }
        other => Err(bad_value(
            "method.kind",
            kind_line,
            format!(
                "unknown kind `{other}` (expected gradient, variable-metric, \
                 gradient-related, relaxed, inexact, exact-line-search)"
            ),
        )),
    }
}

fn read_run_section(keys: &mut KeyReader, config: &mut RunConfig) -> Result<()> {
    if let Some((value, line)) = keys.take("run.iters") {
        config.iters = parse_usize("run.iters", &value, line)?;
        if config.iters == 0 {
            return Err(bad_value("run.iters", line, "must be >= 1"));
        }
    }
    if let Some((value, line)) = keys.take("run.trials") {
        config.trials = parse_usize("run.trials", &value, line)?;
        if config.trials == 0 {
            return Err(bad_value("run.trials", line, "must be >= 1"));
        }
    }
    if let Some((value, line)) = keys.take("run.grid") {
        config.grid = parse_usize("run.grid", &value, line)?;
        if config.grid < 2 {
            return Err(bad_value("run.grid", line, "must be >= 2"));
        }
    }
    if let Some((value, line)) = keys.take("run.seed") {
        config.seed = value
            .parse::<u64>()
            .map_err(|_| bad_value("run.seed", line, "not an integer"))?;
    }
    if let Some((value, line)) = keys.take("run.out") {
        config.out = Some(PathBuf::from(check_nonempty("run.out", &value, line)?));
    }
    if let Some((value, line)) = keys.take("run.x0") {
        config.x0 = if value == "witness" {
            StartSpec::Witness
        } else if value == "random" {
            StartSpec::Random
        } else {
            StartSpec::Point(parse_list("run.x0", &value, line)?)
        };
    }
    Ok(())
}

/// The canonical config the documentation starts from; parsing it back
/// reproduces the documented defaults.
pub fn default_config_text(command: Command) -> String {
    match command {
        Command::Run | Command::Certify | Command::Sweep => "\
[objective]
kind = worstcase
dim = 2
mu = 1.0
L = 3.0

[method]
kind = gradient
h = hbar

[run]
iters = 20
trials = 100
grid = 25
seed = 42
"
        .to_string(),
        Command::WorstCase => "[suite]\nwhich = all\n".to_string(),
        Command::MinCond => "\
[oracle]
theta_deg = 30
trials = 200000
seed = 42
"
        .to_string(),
    }
}

/// Materializes the configured objective (plus the worst-case witness
/// when one exists).
pub fn build_objective(config: &RunConfig) -> Result<(Objective, Option<Vector>)> {
    let spec = config
        .objective
        .as_ref()
        .ok_or_else(|| Error::param("objective", "missing objective section"))?;
    match spec {
        ObjectiveSpecCfg::WorstCase { mu, lipschitz, dim } => {
            let (obj, witness) = Objective::worst_case_quadratic(*mu, *lipschitz, *dim)?;
            Ok((obj, Some(witness)))
        }
        ObjectiveSpecCfg::Random { mu, lipschitz, dim } => {
            let mut rng = rng_for(config.seed, STREAM_START, u64::MAX);
            Ok((
                Objective::random_quadratic(*mu, *lipschitz, *dim, &mut rng)?,
                None,
            ))
        }
        ObjectiveSpecCfg::Softplus { mu, dim, terms } => Ok((
            Objective::softplus_random(*mu, *dim, *terms, config.seed)?,
            None,
        )),
        ObjectiveSpecCfg::Explicit { q, b } => {
            let sym = SymMatrix::from_rows(q)?;
            let n = sym.dim();
            let q = SpdMatrix::new(sym)?;
            let b = match b {
                Some(list) => Vector::new(list.clone())?,
                None => Vector::zeros(n),
            };
            Ok((Objective::quadratic(QuadraticSpec { q, b })?, None))
        }
    }
}

/// Materializes the configured method against an objective.
pub fn build_method(config: &RunConfig, obj: &Objective) -> Result<Method> {
    let spec = config
        .method
        .as_ref()
        .ok_or_else(|| Error::param("method", "missing method section"))?;
    Ok(match spec {
        MethodSpecCfg::Gradient => Method::Gradient,
        MethodSpecCfg::VariableMetric { rows, diag } => {
            let sym = match (rows, diag) {
                (Some(rows), None) => SymMatrix::from_rows(rows)?,
                (None, Some(diag)) => SymMatrix::diagonal(diag),
                _ => unreachable!("validated at parse time"),
            };
            if sym.dim() != obj.dim() {
                return Err(Error::DimensionMismatch {
                    expected: obj.dim(),
                    got: sym.dim(),
                });
            }
            Method::VariableMetric {
                metric: SpdMatrix::new(sym)?,
            }
        }
        MethodSpecCfg::GradientRelated { cos_theta, c } => Method::GradientRelated {
            cos_theta: *cos_theta,
            scale: *c,
        },
        MethodSpecCfg::Relaxed {
            cos_theta_bound,
            c1,
            c2,
        } => Method::GradientRelatedRelaxed {
            cos_theta_bound: *cos_theta_bound,
            scale_min: *c1,
            scale_max: *c2,
        },
        MethodSpecCfg::Inexact { epsilon } => Method::InexactGradient { epsilon: *epsilon },
        MethodSpecCfg::ExactLineSearch { cos_theta } => Method::ExactLineSearch {
            cos_theta: *cos_theta,
        },
    })
}

fn build_plan(config: &RunConfig, obj: &Objective, method: &Method) -> Result<StepPlan> {
    let plan = plan_for(obj, method)?;
    match config.step {
        StepChoice::HBar => Ok(plan),
        StepChoice::Fixed(h) => {
            if config.allow_uncertified {
                plan.with_step_uncertified(h)
            } else {
                plan.with_step(h)
            }
        }
    }
}

fn resolve_start(
    config: &RunConfig,
    obj: &Objective,
    witness: Option<&Vector>,
) -> Result<Vector> {
    match &config.x0 {
        StartSpec::Random => {
            let mut rng = rng_for(config.seed, STREAM_START, u64::MAX - 1);
            Ok(obj
                .minimizer()
                .add(&random_gaussian_vector(obj.dim(), &mut rng)))
        }
        StartSpec::Witness => witness.cloned().ok_or_else(|| {
            Error::param("run.x0", "witness start needs a worstcase objective")
        }),
        StartSpec::Point(coords) => {
            if coords.len() != obj.dim() {
                return Err(Error::DimensionMismatch {
                    expected: obj.dim(),
                    got: coords.len(),
                });
            }
            Vector::new(coords.clone())
        }
    }
}

fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn csv_row(cert: &StepCertificate) -> String {
    format!(
        "{},{},{},{},{},{},{},{}\n",
        cert.iter,
        fmt_real(cert.h),
        fmt_real(cert.gap_before),
        fmt_real(cert.gap_after),
        fmt_opt(cert.observed_ratio),
        fmt_opt(cert.bound),
        fmt_opt(cert.data_dependent_bound),
        cert.verdict.as_str(),
    )
}

pub const CSV_HEADER: &str = "iter,h,gap_before,gap_after,observed_ratio,bound,data_bound,verdict";

/// Writes the report's certificates as CSV. Output bytes are a pure
/// function of the report.
pub fn emit_csv<W: Write>(report: &RunReport, writer: &mut W) -> Result<()> {
    writeln!(writer, "{CSV_HEADER}")?;
    for cert in &report.certificates {
        writer.write_all(csv_row(cert).as_bytes())?;
    }
    Ok(())
}

/// CSV emission straight to a file path.
pub fn emit_csv_path(report: &RunReport, path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    emit_csv(report, &mut file)?;
    Ok(())
}

/// Human-readable report summary: the method, its constants, the bound
/// at `hbar`, the worst observed ratio, and the final verdict line.
pub fn summarize(report: &RunReport) -> String {
    let meta = &report.meta;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "method={} dim={} mu={:.6e} L={:.6e} kappa={:.6e}",
        meta.method, meta.dim, meta.mu, meta.lipschitz, meta.kappa_eff
    );
    let _ = writeln!(
        text,
        "hbar={:.6e} bound(hbar)={:.6e}{}",
        meta.hbar,
        meta.factor_at_hbar,
        meta.h
            .map(|h| format!(" h={h:.6e}"))
            .unwrap_or_default()
    );
    let mut counts = [0usize; 4];
    let mut worst_ratio = None::<f64>;
    for cert in &report.certificates {
        let idx = match cert.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Converged => 2,
            Verdict::Uncertified => 3,
        };
        counts[idx] += 1;
        if cert.verdict != Verdict::Converged {
            if let Some(r) = cert.observed_ratio {
                worst_ratio = Some(worst_ratio.map_or(r, |w: f64| w.max(r)));
            }
        }
    }
    let _ = writeln!(
        text,
        "steps={} pass={} fail={} converged={} uncertified={}",
        report.certificates.len(),
        counts[0],
        counts[1],
        counts[2],
        counts[3]
    );
    if let Some(worst) = worst_ratio {
        let _ = writeln!(
            text,
            "worst ratio={:.6e} worst ratio/bound={:.6e}",
            worst, report.worst_ratio_over_bound
        );
    }
    if let Some(gap) = report.tightness_gap {
        let _ = writeln!(text, "tightness gap={gap:.6e}");
    }
    let _ = writeln!(text, "seed={}", report.master_seed);
    let _ = write!(text, "{}", if report.passed { "PASS" } else { "FAIL" });
    text
}

/// Outcome of a dispatched command.
pub struct Execution {
    pub reports: Vec<RunReport>,
    pub summary: String,
    pub passed: bool,
}

/// Runs the configured command and writes any requested CSV output.
pub fn execute(config: &RunConfig) -> Result<Execution> {
    match config.command {
        Command::Run => {
            let (obj, witness) = build_objective(config)?;
            let method = build_method(config, &obj)?;
            let plan = build_plan(config, &obj, &method)?;
            let x0 = resolve_start(config, &obj, witness.as_ref())?;
            let report = certify_run(&obj, &plan, &x0, config.iters, config.seed)?;
            finish_single(config, report)
        }
        Command::Certify => {
            let (obj, _) = build_objective(config)?;
            let method = build_method(config, &obj)?;
            let plan = build_plan(config, &obj, &method)?;
            let report = certify_trials(&obj, &plan, config.iters, config.trials, config.seed)?;
            finish_single(config, report)
        }
        Command::Sweep => {
            let (obj, _) = build_objective(config)?;
            let method = build_method(config, &obj)?;
            let report =
                sweep_step_sizes(&obj, &method, config.grid, config.trials, config.seed)?;
            finish_single(config, report)
        }
        Command::WorstCase => {
            let cases: Vec<TightnessCase> = match config.suite {
                SuiteSpec::All => TightnessCase::ALL.to_vec(),
                SuiteSpec::One(case) => vec![case],
            };
            let mut reports = Vec::new();
            let mut summary = String::new();
            let mut passed = true;
            for case in cases {
                let report = tightness_suite(case)?;
                passed &= report.passed;
                let _ = writeln!(
                    summary,
                    "{}: observed={:.12e} bound={:.12e} gap={:.3e} {}",
                    case.name(),
                    report.certificates[0].observed_ratio.unwrap_or(f64::NAN),
                    report.certificates[0].bound.unwrap_or(f64::NAN),
                    report.tightness_gap.unwrap_or(f64::NAN),
                    if report.passed { "PASS" } else { "FAIL" }
                );
                reports.push(report);
            }
            // extreme-eigenvector equality spot checks ride along
            let obj = Objective::quadratic(QuadraticSpec {
                q: SpdMatrix::identity(2),
                b: Vector::zeros(2),
            })?;
            let metric = SpdMatrix::diagonal(&[1.0, 2.0])?;
            for end in [SpectrumEnd::Min, SpectrumEnd::Max] {
                let cert = eigenvector_equality_check(&obj, &metric, end)?;
                passed &= cert.verdict == Verdict::Pass;
                let _ = writeln!(
                    summary,
                    "eigenvector-{}: observed={:.12e} bound={:.12e} {}",
                    match end {
                        SpectrumEnd::Min => "min",
                        SpectrumEnd::Max => "max",
                    },
                    cert.observed_ratio.unwrap_or(f64::NAN),
                    cert.bound.unwrap_or(f64::NAN),
                    if cert.verdict == Verdict::Pass {
                        "PASS"
                    } else {
                        "FAIL"
                    }
                );
            }
            let _ = write!(summary, "{}", if passed { "PASS" } else { "FAIL" });
            if let Some(path) = &config.out {
                let mut file = std::fs::File::create(path)?;
                writeln!(file, "{CSV_HEADER}")?;
                for report in &reports {
                    for cert in &report.certificates {
                        file.write_all(csv_row(cert).as_bytes())?;
                    }
                }
            }
            Ok(Execution {
                reports,
                summary,
                passed,
            })
        }
        Command::MinCond => {
            let cos_theta = config
                .oracle_cos_theta
                .ok_or_else(|| Error::param("oracle.theta_deg", "missing required key"))?;
            let scan = min_condition_oracle(cos_theta, config.oracle_trials, config.seed)?;
            // attainment by the rank-one construction, verified through
            // the eigensolver
            let u = Vector::unit(2, 0);
            let s = ((1.0 - cos_theta) * (1.0 + cos_theta)).sqrt();
            let v = Vector::new(vec![cos_theta, s])?;
            let witness = AngleWitness::new(u, v)?;
            let sr1 = sr1_metric(&witness)?;
            let eig = symmetric_eigen(sr1.matrix.sym())?;
            let sr1_kappa = eig.lambda_max() / eig.lambda_min();

            let sound = scan.best_kappa_found >= scan.analytic_min - 1e-8;
            let attained = (sr1_kappa - scan.analytic_min).abs() <= 1e-10 * scan.analytic_min;
            let passed = sound && attained;
            let summary = format!(
                "cos_theta={:.12e}\nanalytic min kappa={:.12e}\nbest kappa found={:.12e} ({} scan points)\n\
                 rank-one construction kappa={:.12e}\nsoundness {} attainment {}\n{}",
                cos_theta,
                scan.analytic_min,
                scan.best_kappa_found,
                config.oracle_trials,
                sr1_kappa,
                if sound { "PASS" } else { "FAIL" },
                if attained { "PASS" } else { "FAIL" },
                if passed { "PASS" } else { "FAIL" }
            );
            Ok(Execution {
                reports: Vec::new(),
                summary,
                passed,
            })
        }
    }
}

fn finish_single(config: &RunConfig, report: RunReport) -> Result<Execution> {
    if let Some(path) = &config.out {
        emit_csv_path(&report, path)?;
    }
    let summary = summarize(&report);
    let passed = report.passed;
    Ok(Execution {
        reports: vec![report],
        summary,
        passed,
    })
}

const USAGE: &str = "\
usage: descent-cert <command> [--config <path>] [--seed <int>] [--out <path>] [--allow-uncertified]

commands:
  run         one certified multi-step run
  certify     certified steps from many random starts
  sweep       one-step certification across a step-size grid
  worst-case  tightness witnesses: bounds attained with equality
  min-cond    minimal condition number scan for a fixed angle

exit status: 0 when every certificate passes, 1 otherwise, 2 on errors.";

/// Entry point for the binary: parses arguments, dispatches, prints the
/// summary to stdout and errors to stderr. Returns the process exit code.
pub fn main_with_args<I: Iterator<Item = String>>(mut args: I) -> i32 {
    let command = match args.next() {
        Some(name) => match Command::parse(&name) {
            Some(c) => c,
            None => {
                eprintln!("unknown command `{name}`\n{USAGE}");
                return 2;
            }
        },
        None => {
            eprintln!("{USAGE}");
            return 2;
        }
    };

    let mut config_path: Option<PathBuf> = None;
    let mut seed_override: Option<u64> = None;
    let mut out_override: Option<PathBuf> = None;
    let mut allow_uncertified = false;
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "--config" => match args.next() {
                Some(p) => config_path = Some(PathBuf::from(p)),
                None => {
                    eprintln!("--config needs a path\n{USAGE}");
                    return 2;
                }
            },
            "--seed" => match args.next().and_then(|s| s.parse::<u64>().ok()) {
                Some(s) => seed_override = Some(s),
                None => {
                    eprintln!("--seed needs an integer\n{USAGE}");
                    return 2;
                }
            },
            "--out" => match args.next() {
                Some(p) => out_override = Some(PathBuf::from(p)),
                None => {
                    eprintln!("--out needs a path\n{USAGE}");
                    return 2;
                }
            },
            "--allow-uncertified" => allow_uncertified = true,
            other => {
                eprintln!("unknown flag `{other}`\n{USAGE}");
                return 2;
            }
        }
    }

    let text = match &config_path {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read config {}: {e}", path.display());
                return 2;
            }
        },
        None => {
            if command == Command::WorstCase {
                default_config_text(command)
            } else {
                eprintln!("command `{}` needs --config <path>\n{USAGE}", command.name());
                return 2;
            }
        }
    };

    let mut config = match parse_config(&text, command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return 2;
        }
    };
    if let Some(seed) = seed_override {
        config.seed = seed;
    }
    if let Some(out) = out_override {
        config.out = Some(out);
    }
    config.allow_uncertified = allow_uncertified;

    match execute(&config) {
        Ok(execution) => {
            println!("{}", execution.summary);
            if execution.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("{e}");
            2
        }
    }
}
