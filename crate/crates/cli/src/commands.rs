//! `run`, `sweep` and `verify`.
//!
//! Every report is `{"payload": ..., "metadata": ...}`. The payload depends
//! only on the configuration and seed; wall-clock data lives in metadata.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use reality_steer::par::try_map_indices;
use reality_steer::protocol::{
    analytic_post_distribution, decoupling_sweep, is_blank, DecouplingSweepRow, EnsembleSummary,
    Participation, PreparedScenario, Scenario, TrialReport,
};
use reality_steer::statevec::{trial_seed, ProbabilityTable};
use reality_steer::stats::chi_square_gof;
use reality_steer::verify::{run_suite, CheckName, Verdict};
use reality_steer::Execution;
use serde::Serialize;

use crate::config::{RunConfig, SweepAxis, SweepConfig};
use crate::error::{CliError, EXIT_OK, EXIT_VERIFY_FAILED};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub out: Option<PathBuf>,
    pub trials: Option<u64>,
    pub format: Format,
    pub exec: Execution,
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated_unix_seconds: u64,
    pub elapsed_ms: u128,
    pub execution: &'static str,
    pub threads: Option<usize>,
    pub output_path: Option<String>,
}

impl Metadata {
    fn new(started: Instant, opts: &Options, out: Option<&Path>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            generated_unix_seconds: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            elapsed_ms: started.elapsed().as_millis(),
            execution: match opts.exec {
                Execution::Parallel if Execution::parallel_available() => "parallel",
                _ => "sequential",
            },
            threads: opts.threads,
            output_path: out.map(|p| p.display().to_string()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report<P> {
    pub payload: P,
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary {
    pub trials: u64,
    pub branches: Vec<String>,
    pub pre_frequencies: Vec<f64>,
    pub post_frequencies: Vec<f64>,
    pub predicted_post: Vec<f64>,
    pub switched_fraction: f64,
    pub erased_fraction: f64,
    pub memory_consistent_fraction: f64,
    pub mean_brain_purity_after_erase: f64,
    pub mean_brain_entropy_after_erase: f64,
    pub cat_marginal_before: ProbabilityTable,
    pub cat_marginal_after: ProbabilityTable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunPayload {
    pub config: RunConfig,
    pub summary: RunSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_trial: Option<Vec<TrialReport>>,
}

fn labels(scenario: &Scenario) -> Vec<String> {
    scenario.branches.labels().iter().map(ToString::to_string).collect()
}

fn run_reports(
    scenario: &Scenario,
    trials: u64,
    exec: Execution,
) -> Result<Vec<TrialReport>, CliError> {
    let prepared = PreparedScenario::new(scenario)?;
    let base = scenario.rng_seed;
    try_map_indices(trials, exec, |i| {
        prepared
            .trial(i, trial_seed(base, i))
            .map_err(|e| CliError::Runtime(format!("trial {i}: {e}")))
    })
}

fn summarize(scenario: &Scenario, reports: &[TrialReport]) -> Result<RunSummary, CliError> {
    let summary = EnsembleSummary::from_reports(scenario, reports);
    let n = summary.trials.max(1) as f64;
    let first = reports
        .first()
        .ok_or_else(|| CliError::Runtime("no trials were run".into()))?;
    Ok(RunSummary {
        trials: summary.trials,
        branches: labels(scenario),
        pre_frequencies: summary.pre_frequencies(),
        post_frequencies: summary.post_frequencies(),
        predicted_post: analytic_post_distribution(scenario)?,
        switched_fraction: summary.switched as f64 / n,
        erased_fraction: summary.erased as f64 / n,
        memory_consistent_fraction: summary.memory_consistent as f64 / n,
        mean_brain_purity_after_erase: reports.iter().map(|r| r.brain_purity_after_erase).sum::<f64>() / n,
        mean_brain_entropy_after_erase: reports
            .iter()
            .map(|r| r.brain_entropy_after_erase)
            .sum::<f64>()
            / n,
        cat_marginal_before: first.cat_marginal_before.clone(),
        cat_marginal_after: first.cat_marginal_after.clone(),
    })
}

/// Runs the ensemble of `config` (trial count overridable) and builds the
/// deterministic part of the report.
pub fn run_payload(config: &RunConfig, trials: Option<u64>, exec: Execution) -> Result<RunPayload, CliError> {
    let mut config = config.clone();
    if let Some(t) = trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        config.num_trials = t;
    }
    let reports = run_reports(&config.scenario, config.num_trials, exec)?;
    let summary = summarize(&config.scenario, &reports)?;
    let per_trial = config.emit_per_trial.then_some(reports);
    Ok(RunPayload {
        config,
        summary,
        per_trial,
    })
}

fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn json<P: Serialize>(payload: P, started: Instant, opts: &Options, out: Option<&Path>) -> Result<Vec<u8>, CliError> {
    let report = Report {
        payload,
        metadata: Metadata::new(started, opts, out),
    };
    let mut bytes = serde_json::to_vec_pretty(&report)
        .map_err(|e| CliError::Runtime(format!("serialization: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn csv_bytes<F>(fill: F) -> Result<Vec<u8>, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> csv::Result<()>,
{
    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        fill(&mut w).map_err(|e| CliError::Runtime(format!("csv: {e}")))?;
        w.flush()?;
    }
    Ok(buf)
}

fn fmt_f(x: f64) -> String {
    format!("{x}")
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn run_csv(p: &RunPayload) -> Result<Vec<u8>, CliError> {
    let s = &p.summary;
    csv_bytes(|w| {
        w.write_record(["branch", "pre_frequency", "post_frequency", "predicted_post"])?;
        for (i, b) in s.branches.iter().enumerate() {
            w.write_record([
                b.clone(),
                fmt_f(s.pre_frequencies[i]),
                fmt_f(s.post_frequencies[i]),
                fmt_f(s.predicted_post[i]),
            ])?;
        }
        Ok(())
    })
}

fn trials_csv(reports: &[TrialReport]) -> Result<Vec<u8>, CliError> {
    csv_bytes(|w| {
        w.write_record([
            "trial_index",
            "seed",
            "pre_outcome",
            "post_outcome",
            "switched",
            "erased",
            "brain_purity_after_erase",
            "brain_entropy_after_erase",
            "memory_consistent",
        ])?;
        for r in reports {
            w.write_record([
                r.trial_index.to_string(),
                r.seed.to_string(),
                r.pre_outcome.to_string(),
                r.post_outcome.to_string(),
                r.switched.to_string(),
                r.erased.to_string(),
                fmt_f(r.brain_purity_after_erase),
                fmt_f(r.brain_entropy_after_erase),
                r.memory_consistent.to_string(),
            ])?;
        }
        Ok(())
    })
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn cmd_run(config: &RunConfig, opts: &Options) -> Result<u8, CliError> {
    let started = Instant::now();
    let payload = run_payload(config, opts.trials, opts.exec)?;
    let out = opts.out.as_deref().or(config.output_path.as_deref());
    match opts.format {
        Format::Json => write_output(out, &json(&payload, started, opts, out)?)?,
        Format::Csv => {
            write_output(out, &run_csv(&payload)?)?;
            if let Some(reports) = &payload.per_trial {
                let bytes = trials_csv(reports)?;
                match out {
                    Some(path) => write_output(Some(&sibling(path, ".trials.csv")), &bytes)?,
                    None => {
                        write_output(None, b"\n")?;
                        write_output(None, &bytes)?;
                    }
                }
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub trials: u64,
    pub empirical: Vec<f64>,
    pub predicted: Vec<f64>,
    pub max_abs_deviation: Option<f64>,
    pub chi2_p_value: Option<f64>,
    pub brain_purity_after_erase: Option<f64>,
    pub erasure_passed: Option<bool>,
    pub memory_consistent_fraction: Option<f64>,
    pub mean_leaked_info_bits: Option<f64>,
    pub mean_conditional_trace_distance: Option<f64>,
    pub feasible_fraction: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPayload {
    pub config: SweepConfig,
    pub branches: Vec<String>,
    pub rows: Vec<SweepRow>,
}

fn ensemble_row(cfg: &SweepConfig, value: f64, trials: u64, exec: Execution) -> Result<SweepRow, CliError> {
    let scenario = cfg.point(value)?;
    let prepared = PreparedScenario::new(&scenario)?;
    let reports = run_reports(&scenario, trials, exec)?;
    let summary = EnsembleSummary::from_reports(&scenario, &reports);
    let predicted = analytic_post_distribution(&scenario)?;
    let empirical = summary.post_frequencies();
    let deviation = empirical
        .iter()
        .zip(&predicted)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let fit = chi_square_gof(&summary.post_counts, &predicted)?;
    let purity = reports.first().map(|r| r.brain_purity_after_erase);
    let erasure_passed = if scenario.participation == Participation::All {
        let blank = is_blank(
            prepared.after_clinic(),
            prepared.layout(),
            scenario.encoding.brain_subsystems(),
        )?;
        Some(blank && purity.is_some_and(|p| (p - 1.0).abs() < 1e-12))
    } else {
        None
    };
    Ok(SweepRow {
        axis: cfg.axis,
        value,
        trials,
        empirical,
        predicted,
        max_abs_deviation: Some(deviation),
        chi2_p_value: Some(fit.p_value),
        brain_purity_after_erase: purity,
        erasure_passed,
        memory_consistent_fraction: Some(summary.memory_consistent as f64 / summary.trials.max(1) as f64),
        mean_leaked_info_bits: None,
        mean_conditional_trace_distance: None,
        feasible_fraction: None,
    })
}

fn decoupling_row(cfg: &SweepConfig, value: f64, row: &DecouplingSweepRow) -> SweepRow {
    SweepRow {
        axis: cfg.axis,
        value,
        trials: row.encodings as u64,
        empirical: Vec::new(),
        predicted: Vec::new(),
        max_abs_deviation: None,
        chi2_p_value: None,
        brain_purity_after_erase: None,
        erasure_passed: None,
        memory_consistent_fraction: None,
        mean_leaked_info_bits: Some(row.mean_leaked_info_bits),
        mean_conditional_trace_distance: Some(row.mean_conditional_trace_distance),
        feasible_fraction: Some(row.feasible_fraction),
    }
}

pub fn sweep_payload(cfg: &SweepConfig, trials: Option<u64>, exec: Execution) -> Result<SweepPayload, CliError> {
    let mut cfg = cfg.clone();
    if let Some(t) = trials {
        if t == 0 {
            return Err(CliError::Usage("--trials must be at least 1".into()));
        }
        cfg.trials_per_point = t;
    }
    let rows = if cfg.axis == SweepAxis::AccessibleK {
        let all = decoupling_sweep(cfg.record_qubits, cfg.encodings, cfg.base.rng_seed, exec)?;
        cfg.values
            .iter()
            .map(|&v| decoupling_row(&cfg, v, &all[v as usize]))
            .collect()
    } else {
        cfg.values
            .iter()
            .map(|&v| ensemble_row(&cfg, v, cfg.trials_per_point, exec))
            .collect::<Result<Vec<_>, _>>()?
    };
    Ok(SweepPayload {
        branches: labels(&cfg.base),
        config: cfg,
        rows,
    })
}

fn sweep_csv(p: &SweepPayload) -> Result<Vec<u8>, CliError> {
    csv_bytes(|w| {
        let mut header = vec!["axis".to_owned(), "value".into(), "trials".into()];
        for b in &p.branches {
            header.push(format!("empirical_{b}"));
            header.push(format!("predicted_{b}"));
        }
        header.extend(
            [
                "max_abs_deviation",
                "chi2_p_value",
                "brain_purity_after_erase",
                "erasure_passed",
                "memory_consistent_fraction",
                "mean_leaked_info_bits",
                "mean_conditional_trace_distance",
                "feasible_fraction",
            ]
            .map(String::from),
        );
        w.write_record(&header)?;
        for r in &p.rows {
            let mut rec = vec![r.axis.as_str().to_owned(), fmt_f(r.value), r.trials.to_string()];
            for i in 0..p.branches.len() {
                rec.push(opt(r.empirical.get(i)));
                rec.push(opt(r.predicted.get(i)));
            }
            rec.extend([
                opt(r.max_abs_deviation),
                opt(r.chi2_p_value),
                opt(r.brain_purity_after_erase),
                opt(r.erasure_passed),
                opt(r.memory_consistent_fraction),
                opt(r.mean_leaked_info_bits),
                opt(r.mean_conditional_trace_distance),
                opt(r.feasible_fraction),
            ]);
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

pub fn cmd_sweep(cfg: &SweepConfig, opts: &Options) -> Result<u8, CliError> {
    let started = Instant::now();
    let payload = sweep_payload(cfg, opts.trials, opts.exec)?;
    let out = opts.out.as_deref().or(cfg.output_path.as_deref());
    let bytes = match opts.format {
        Format::Json => json(&payload, started, opts, out)?,
        Format::Csv => sweep_csv(&payload)?,
    };
    write_output(out, &bytes)?;
    Ok(EXIT_OK)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyPayload {
    pub seed: u64,
    pub all_passed: bool,
    pub verdicts: Vec<Verdict>,
}

pub fn verify_payload<S: AsRef<str>>(suite: &[S], seed: u64, exec: Execution) -> Result<VerifyPayload, CliError> {
    let checks = CheckName::parse_selectors(suite).map_err(|_| {
        let known: Vec<&str> = CheckName::CORE
            .iter()
            .chain(&CheckName::EXTRA)
            .map(|c| c.as_str())
            .collect();
        let given: Vec<&str> = suite.iter().map(AsRef::as_ref).collect();
        CliError::Usage(format!(
            "unknown check in `{}`; known: all, {}",
            given.join(","),
            known.join(", ")
        ))
    })?;
    if checks.is_empty() {
        return Err(CliError::Usage("no checks selected".into()));
    }
    let verdicts = run_suite(&checks, seed, exec)?;
    Ok(VerifyPayload {
        seed,
        all_passed: verdicts.iter().all(|v| v.passed),
        verdicts,
    })
}

/// Prints the verdict table; with `--out` also writes a JSON or CSV report.
/// Returns exit code 1 if any verdict failed.
pub fn cmd_verify<S: AsRef<str>>(suite: &[S], seed: u64, opts: &Options) -> Result<u8, CliError> {
    let started = Instant::now();
    let payload = verify_payload(suite, seed, opts.exec)?;
    let table: String = payload.verdicts.iter().map(|v| format!("{v}\n")).collect();
    match &opts.out {
        Some(path) => {
            print!("{table}");
            let bytes = match opts.format {
                Format::Json => json(&payload, started, opts, Some(path))?,
                Format::Csv => csv_bytes(|w| {
                    w.write_record(["check_name", "passed", "metric", "tolerance", "comparison", "details"])?;
                    for v in &payload.verdicts {
                        w.write_record([
                            v.check_name.clone(),
                            v.passed.to_string(),
                            fmt_f(v.metric),
                            fmt_f(v.tolerance),
                            format!("{:?}", v.comparison).to_lowercase(),
                            v.details.clone(),
                        ])?;
                    }
                    Ok(())
                })?,
            };
            write_output(Some(path), &bytes)?;
        }
        None => print!("{table}"),
    }
    Ok(if payload.all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
