//! TOML configuration files.
//!
//! A file holds a `[scenario]` table and exactly one of `[run]` or `[sweep]`:
//!
//! ```toml
//! [scenario]
//! num_alive = 1            # alive-family branches
//! num_dead = 1             # dead-family branches
//! # weights = [0.6, 0.8]   # real amplitudes, or [[re, im], ...]
//! # alive_probability = 0.36  # two-branch shortcut, exclusive with weights
//! env_qubits = 1           # environment records
//! encoding = "plain"       # plain | tagged
//! observe_variant = "a"    # a | b | c
//! participation = "all"    # all | dead_only | alive_only
//! # nonlinear_lambda = 2.0
//! rng_seed = 42
//!
//! [run]
//! num_trials = 10000
//! output_path = "report.json"
//! emit_per_trial = false
//!
//! # [sweep]
//! # axis = "lambda"        # lambda | env_qubits | accessible_k | weight_c0sq
//! # values = [0.5, 1.0, 2.0]
//! # trials_per_point = 10000
//! # record_qubits = 10     # accessible_k only
//! # encodings = 20         # accessible_k only
//! ```
//!
//! Every range and budget problem is reported with the offending key and,
//! when the key is present in the file, its line.

use std::fmt;
use std::ops::Range;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use reality_steer::protocol::{
    BranchStructure, ObserveVariant, Participation, RecordEncoding, Scenario, MAX_RECORD_QUBITS,
};
use reality_steer::Error as CoreError;
use serde::{Deserialize, Serialize};
use toml::Spanned;

#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, ", key `{key}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub num_trials: u64,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub emit_per_trial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Lambda,
    EnvQubits,
    AccessibleK,
    WeightC0sq,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::Lambda => "lambda",
            SweepAxis::EnvQubits => "env_qubits",
            SweepAxis::AccessibleK => "accessible_k",
            SweepAxis::WeightC0sq => "weight_c0sq",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepConfig {
    pub base: Scenario,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub trials_per_point: u64,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub record_qubits: usize,
    pub encodings: usize,
}

impl SweepConfig {
    /// Scenario at one axis value. Not meaningful for `accessible_k`, which
    /// does not change the scenario.
    pub fn point(&self, value: f64) -> reality_steer::Result<Scenario> {
        let s = match self.axis {
            SweepAxis::Lambda => self.base.clone().with_lambda(Some(value)),
            SweepAxis::EnvQubits => self.base.clone().with_env_qubits(value as usize),
            SweepAxis::WeightC0sq => self
                .base
                .clone()
                .with_branches(BranchStructure::from_alive_probability(value)?),
            SweepAxis::AccessibleK => self.base.clone(),
        };
        s.validate()?;
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Config {
    Run(RunConfig),
    Sweep(SweepConfig),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum RawWeights {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    num_alive: Option<Spanned<i64>>,
    num_dead: Option<Spanned<i64>>,
    weights: Option<Spanned<RawWeights>>,
    alive_probability: Option<Spanned<f64>>,
    env_qubits: Option<Spanned<i64>>,
    encoding: Option<RecordEncoding>,
    observe_variant: Option<ObserveVariant>,
    participation: Option<Participation>,
    nonlinear_lambda: Option<Spanned<f64>>,
    rng_seed: Option<Spanned<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    num_trials: Option<Spanned<i64>>,
    output_path: Option<PathBuf>,
    #[serde(default)]
    emit_per_trial: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: Option<SweepAxis>,
    values: Option<Spanned<Vec<f64>>>,
    trials_per_point: Option<Spanned<i64>>,
    output_path: Option<PathBuf>,
    record_qubits: Option<Spanned<i64>>,
    encodings: Option<Spanned<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    scenario: Option<Spanned<RawScenario>>,
    run: Option<Spanned<RawRun>>,
    sweep: Option<Spanned<RawSweep>>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, offset: usize) -> usize {
        self.text[..offset.min(self.text.len())].matches('\n').count() + 1
    }

    fn err(&self, key: &str, span: Option<Range<usize>>, msg: impl Into<String>) -> ConfigError {
        ConfigError {
            key: Some(key.into()),
            line: span.map(|s| self.line(s.start)),
            message: msg.into(),
        }
    }

    fn int<T: TryFrom<i64>>(
        &self,
        key: &str,
        v: &Option<Spanned<i64>>,
        default: T,
        min: i64,
    ) -> Result<T, ConfigError> {
        match v {
            None => Ok(default),
            Some(s) => {
                let x = *s.get_ref();
                if x < min {
                    return Err(self.err(key, Some(s.span()), format!("must be >= {min}, got {x}")));
                }
                T::try_from(x).map_err(|_| self.err(key, Some(s.span()), format!("{x} is out of range")))
            }
        }
    }
}

fn span_of<T>(v: &Option<Spanned<T>>) -> Option<Range<usize>> {
    v.as_ref().map(Spanned::span)
}

fn build_scenario(ctx: &Ctx, raw: &Spanned<RawScenario>) -> Result<Scenario, ConfigError> {
    let r = raw.get_ref();
    let canonical = Scenario::canonical();
    let num_alive: usize = ctx.int("num_alive", &r.num_alive, 1, 1)?;
    let num_dead: usize = ctx.int("num_dead", &r.num_dead, 1, 1)?;

    let branches = match (&r.weights, &r.alive_probability) {
        (Some(w), Some(_)) => {
            return Err(ctx.err(
                "alive_probability",
                Some(w.span()),
                "give either `weights` or `alive_probability`, not both",
            ))
        }
        (Some(w), None) => {
            let weights: Vec<Complex64> = match w.get_ref() {
                RawWeights::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                RawWeights::Complex(v) => v.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
            };
            BranchStructure::new(num_alive, num_dead, weights)
                .map_err(|e| ctx.err("weights", Some(w.span()), e.to_string()))?
        }
        (None, Some(p)) => {
            if num_alive != 1 || num_dead != 1 {
                return Err(ctx.err(
                    "alive_probability",
                    Some(p.span()),
                    "only valid for one alive and one dead branch",
                ));
            }
            BranchStructure::from_alive_probability(*p.get_ref())
                .map_err(|e| ctx.err("alive_probability", Some(p.span()), e.to_string()))?
        }
        (None, None) => BranchStructure::uniform(num_alive, num_dead)
            .map_err(|e| ctx.err("num_alive", span_of(&r.num_alive), e.to_string()))?,
    };

    if let Some(l) = &r.nonlinear_lambda {
        let x = *l.get_ref();
        if !x.is_finite() || x < 0.0 {
            return Err(ctx.err(
                "nonlinear_lambda",
                Some(l.span()),
                format!("must be finite and >= 0, got {x}"),
            ));
        }
    }
    let seed: u64 = ctx.int("rng_seed", &r.rng_seed, canonical.rng_seed, 0)?;
    let scenario = Scenario {
        branches,
        env_qubits: ctx.int("env_qubits", &r.env_qubits, 1, 1)?,
        encoding: r.encoding.unwrap_or_default(),
        observe_variant: r.observe_variant.unwrap_or_default(),
        participation: r.participation.unwrap_or_default(),
        nonlinear_lambda: r.nonlinear_lambda.as_ref().map(|l| *l.get_ref()),
        rng_seed: seed,
    };
    scenario.validate().map_err(|e| scenario_error(ctx, r, raw.span(), e))?;
    Ok(scenario)
}

fn scenario_error(
    ctx: &Ctx,
    r: &RawScenario,
    table: Range<usize>,
    e: CoreError,
) -> ConfigError {
    let (key, span) = match &e {
        CoreError::QubitBudget { .. } => ("env_qubits", span_of(&r.env_qubits)),
        CoreError::InvalidScenario { field, .. } => {
            let span = match *field {
                "nonlinear_lambda" => span_of(&r.nonlinear_lambda),
                "env_qubits" => span_of(&r.env_qubits),
                _ => None,
            };
            (*field, span)
        }
        _ => ("scenario", None),
    };
    ctx.err(key, span.or(Some(table)), e.to_string())
}

fn missing(section: &str, key: &str, ctx: &Ctx, span: Range<usize>) -> ConfigError {
    ctx.err(key, Some(span), format!("missing required key `{key}` in [{section}]"))
}

pub fn parse_config_str(text: &str) -> Result<Config, ConfigError> {
    let raw: RawFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        ConfigError {
            key: None,
            line,
            message: e.message().trim().to_owned(),
        }
    })?;
    let ctx = Ctx { text };
    let scenario_raw = raw.scenario.as_ref().ok_or(ConfigError {
        key: Some("scenario".into()),
        line: None,
        message: "missing [scenario] table".into(),
    })?;
    let scenario = build_scenario(&ctx, scenario_raw)?;

    match (&raw.run, &raw.sweep) {
        (Some(_), Some(s)) => Err(ctx.err(
            "sweep",
            Some(s.span()),
            "a file holds either [run] or [sweep], not both",
        )),
        (None, None) => Err(ConfigError {
            key: Some("run".into()),
            line: None,
            message: "missing [run] or [sweep] table".into(),
        }),
        (Some(run), None) => {
            let r = run.get_ref();
            if r.num_trials.is_none() {
                return Err(missing("run", "num_trials", &ctx, run.span()));
            }
            Ok(Config::Run(RunConfig {
                scenario,
                num_trials: ctx.int("num_trials", &r.num_trials, 1, 1)?,
                output_path: r.output_path.clone(),
                emit_per_trial: r.emit_per_trial,
            }))
        }
        (None, Some(sweep)) => {
            let s = sweep.get_ref();
            let axis = s.axis.ok_or_else(|| missing("sweep", "axis", &ctx, sweep.span()))?;
            let values = s
                .values
                .as_ref()
                .ok_or_else(|| missing("sweep", "values", &ctx, sweep.span()))?;
            let cfg = SweepConfig {
                base: scenario,
                axis,
                values: values.get_ref().clone(),
                trials_per_point: ctx.int("trials_per_point", &s.trials_per_point, 10_000, 1)?,
                output_path: s.output_path.clone(),
                record_qubits: ctx.int("record_qubits", &s.record_qubits, 10, 1)?,
                encodings: ctx.int("encodings", &s.encodings, 20, 1)?,
            };
            validate_sweep(&ctx, &cfg, s, values.span())?;
            Ok(Config::Sweep(cfg))
        }
    }
}

fn validate_sweep(
    ctx: &Ctx,
    cfg: &SweepConfig,
    raw: &RawSweep,
    values_span: Range<usize>,
) -> Result<(), ConfigError> {
    let bad = |msg: String| ctx.err("values", Some(values_span.clone()), msg);
    if cfg.values.is_empty() {
        return Err(bad("must not be empty".into()));
    }
    if cfg.axis == SweepAxis::AccessibleK && cfg.record_qubits > MAX_RECORD_QUBITS {
        return Err(ctx.err(
            "record_qubits",
            span_of(&raw.record_qubits),
            format!("at most {MAX_RECORD_QUBITS} record qubits are supported"),
        ));
    }
    for &v in &cfg.values {
        let integral = v.fract() == 0.0 && v >= 0.0;
        match cfg.axis {
            SweepAxis::EnvQubits if !integral || v < 1.0 => {
                return Err(bad(format!("env_qubits values are integers >= 1, got {v}")))
            }
            SweepAxis::AccessibleK if !integral || v > cfg.record_qubits as f64 => {
                return Err(bad(format!(
                    "accessible_k values are integers in 0..={}, got {v}",
                    cfg.record_qubits
                )))
            }
            SweepAxis::WeightC0sq if !(0.0..=1.0).contains(&v) => {
                return Err(bad(format!("weight_c0sq values lie in [0, 1], got {v}")))
            }
            SweepAxis::Lambda if !v.is_finite() || v < 0.0 => {
                return Err(bad(format!("lambda values are finite and >= 0, got {v}")))
            }
            _ => {}
        }
        if cfg.axis != SweepAxis::AccessibleK {
            cfg.point(v).map_err(|e| bad(format!("at value {v}: {e}")))?;
        }
    }
    Ok(())
}

pub fn parse_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        key: None,
        line: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    parse_config_str(&text)
}
