//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero on failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;
use reality_steer::channels::nonlinear_probabilities;
use reality_steer::protocol::{
    clinic_erase, decoupling_sweep, feasibility_crossing, initial_state, observe, protocol_layout,
    BranchStructure, EnsembleSummary, Family, ObserveVariant, Participation, PreparedScenario,
    RecordEncoding, Scenario,
};
use reality_steer::statevec::{partial_trace, RegisterLayout, StateVector};
use reality_steer::stats::chi_square_gof;
use reality_steer::verify::{
    check_antilinear_witness, check_circuit_equivalence, check_coordination,
    check_indistinguishability, check_no_signalling, check_nonlinear_witness,
};
use reality_steer::Execution;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within_time(started: Instant, limit: Duration) -> Result<(), String> {
    let t = started.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

/// Basis index of a configuration given as `(subsystem, value)` pairs.
fn index_of(layout: &RegisterLayout, values: &[(&str, usize)]) -> usize {
    let n = layout.total_qubits();
    let mut idx = 0;
    for &(name, value) in values {
        let qubits = layout.qubits(name).unwrap();
        for (j, &q) in qubits.iter().enumerate() {
            let bit = value >> (qubits.len() - 1 - j) & 1;
            idx |= bit << (n - 1 - q);
        }
    }
    idx
}

fn explicit_state(layout: &RegisterLayout, terms: &[(Complex64, Vec<(&str, usize)>)]) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << layout.total_qubits()];
    for (w, values) in terms {
        amps[index_of(layout, values)] += w;
    }
    StateVector::from_amplitudes(amps).unwrap()
}

fn ghz_equivalence() -> Outcome {
    let started = Instant::now();
    let v = check_circuit_equivalence().map_err(e)?;
    // independent target (|000> + |111>)/sqrt2 on C, B, E1 with A, F blank
    let layout = protocol_layout(1, RecordEncoding::Plain, 1).map_err(e)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let target = explicit_state(
        &layout,
        &[
            (Complex64::new(s, 0.0), vec![]),
            (Complex64::new(s, 0.0), vec![("C", 1), ("B", 1), ("E1", 1)]),
        ],
    );
    let init = initial_state(&BranchStructure::canonical(), &layout).map_err(e)?;
    let mut worst: f64 = 0.0;
    for variant in [ObserveVariant::A, ObserveVariant::B, ObserveVariant::C] {
        let o = observe(&init, &layout, variant, RecordEncoding::Plain).map_err(e)?;
        worst = worst.max(o.max_abs_diff(&target));
    }
    ensure(v.passed, v.to_string())?;
    ensure(worst < 1e-12, format!("deviation from GHZ {worst:e}"))?;
    within_time(started, Duration::from_secs(1))?;
    Ok(format!("max deviation {:.1e}", worst.max(v.metric)))
}

fn erasure_exactness() -> Outcome {
    let mut worst: f64 = 0.0;
    for encoding in [RecordEncoding::Plain, RecordEncoding::Tagged] {
        for p0 in [0.1, 0.36, 0.5, 0.9] {
            let branches = BranchStructure::from_alive_probability(p0).map_err(e)?;
            let layout = protocol_layout(1, encoding, 1).map_err(e)?;
            let init = initial_state(&branches, &layout).map_err(e)?;
            let observed = observe(&init, &layout, ObserveVariant::A, encoding).map_err(e)?;
            let erased = clinic_erase(&observed, &layout, encoding).map_err(e)?;
            let (c0, c1) = (Complex64::new(p0.sqrt(), 0.0), Complex64::new((1.0 - p0).sqrt(), 0.0));
            let tag: Vec<(&str, usize)> = if encoding.is_tagged() { vec![("AF", 1)] } else { vec![] };
            let mut alive = vec![("F", 1)];
            alive.extend(tag.iter().copied());
            let mut dead = vec![("C", 1), ("E1", 1), ("A", 1), ("F", 1)];
            dead.extend(tag.iter().copied());
            let target = explicit_state(&layout, &[(c0, alive), (c1, dead)]);
            let dev = erased.max_abs_diff(&target);
            let purity = partial_trace(&erased, &layout, encoding.brain_subsystems())
                .map_err(e)?
                .purity();
            ensure(
                dev < 1e-12 && (purity - 1.0).abs() < 1e-12,
                format!("{encoding:?} p0={p0}: deviation {dev:e}, purity {purity}"),
            )?;
            worst = worst.max(dev).max((purity - 1.0).abs());
        }
    }
    Ok(format!("8 cases, worst {worst:.1e}"))
}

fn no_signalling() -> Outcome {
    let started = Instant::now();
    let v = check_no_signalling(100, 2024).map_err(e)?;
    ensure(v.passed && v.metric < 1e-10, v.to_string())?;
    within_time(started, Duration::from_secs(10))?;
    Ok(format!("max trace distance {:.1e} in {:?}", v.metric, started.elapsed()))
}

fn indistinguishability() -> Outcome {
    let mut worst: f64 = 0.0;
    for p0 in [0.5, 0.36, 0.1, 0.9] {
        for encoding in [RecordEncoding::Plain, RecordEncoding::Tagged] {
            let sc = Scenario::canonical()
                .with_branches(BranchStructure::from_alive_probability(p0).map_err(e)?)
                .with_encoding(encoding)
                .with_env_qubits(2);
            let v = check_indistinguishability(&sc).map_err(e)?;
            ensure(v.passed, format!("p0={p0}: {v}"))?;
            worst = worst.max(v.metric);
        }
    }
    Ok(format!("worst trace distance {worst:.1e}"))
}

fn coordination() -> Outcome {
    let tagged = Scenario::canonical().with_encoding(RecordEncoding::Tagged);
    let blocked = check_coordination(&tagged.clone().with_participation(Participation::DeadOnly))
        .map_err(e)?;
    ensure(
        blocked.passed && (blocked.metric - 1.0).abs() < 1e-9,
        format!("dead-only entropy {}", blocked.metric),
    )?;
    let enabled = check_coordination(&tagged).map_err(e)?;
    ensure(enabled.passed && enabled.metric < 1e-10, format!("all entropy {}", enabled.metric))?;

    let four = tagged
        .with_branches(BranchStructure::uniform(2, 2).map_err(e)?)
        .with_participation(Participation::DeadOnly)
        .with_seed(77);
    let reports = PreparedScenario::new(&four)
        .map_err(e)?
        .ensemble(30_000, Execution::Parallel)
        .map_err(e)?;
    let reobserved: Vec<_> = reports.iter().filter(|r| r.erased).take(10_000).collect();
    ensure(reobserved.len() == 10_000, format!("only {} re-observations", reobserved.len()))?;
    let dead = reobserved
        .iter()
        .filter(|r| r.post_outcome.family == Family::Dead)
        .count();
    ensure(dead == 10_000, format!("{dead}/10000 re-observations in the dead family"))?;
    Ok(format!(
        "S(dead-only)={:.12}, S(all)={:.1e}, 10000/10000 confined",
        blocked.metric, enabled.metric
    ))
}

fn born_statistics() -> Outcome {
    let started = Instant::now();
    let sc = Scenario::canonical().with_seed(31_415);
    let reports = PreparedScenario::new(&sc)
        .map_err(e)?
        .ensemble(100_000, Execution::Parallel)
        .map_err(e)?;
    let summary = EnsembleSummary::from_reports(&sc, &reports);
    let alive = summary.post_frequencies()[0];
    ensure((alive - 0.5).abs() <= 0.005, format!("alive frequency {alive}"))?;
    let fit = chi_square_gof(&summary.post_counts, &[0.5, 0.5]).map_err(e)?;
    ensure(fit.p_value > 0.001, format!("chi-square p = {}", fit.p_value))?;
    ensure(
        summary.memory_consistent == summary.trials,
        "a trajectory had inconsistent records",
    )?;
    within_time(started, Duration::from_secs(30))?;
    Ok(format!("alive {alive:.4}, p = {:.3}", fit.p_value))
}

fn nonlinear_filter() -> Outcome {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let (p0, p1) = nonlinear_probabilities(h, h, 2.0).map_err(e)?;
    ensure(
        (p0 - 0.2).abs() < 1e-12 && (p1 - 0.8).abs() < 1e-12,
        format!("closed form ({p0}, {p1})"),
    )?;
    let sc = Scenario::canonical().with_lambda(Some(2.0)).with_seed(2718);
    let prepared = PreparedScenario::new(&sc).map_err(e)?;
    let exact = prepared.final_distribution();
    ensure(
        (exact[0] - 0.2).abs() < 1e-12 && (exact[1] - 0.8).abs() < 1e-12,
        format!("simulated distribution {exact:?}"),
    )?;
    let n = 100_000u64;
    let reports = prepared.ensemble(n, Execution::Parallel).map_err(e)?;
    let dead = EnsembleSummary::from_reports(&sc, &reports).post_frequencies()[1];
    let sigma = (0.8f64 * 0.2 / n as f64).sqrt();
    ensure((dead - 0.8).abs() <= 3.0 * sigma, format!("dead frequency {dead}, 3 sigma {}", 3.0 * sigma))?;

    let witness = check_nonlinear_witness(2.0, h, h).map_err(e)?;
    ensure((witness.metric - 0.3).abs() < 1e-12, format!("witness {}", witness.metric))?;
    let linear = check_nonlinear_witness(1.0, h, h).map_err(e)?;
    ensure(linear.metric.abs() < 1e-12, format!("lambda=1 witness {}", linear.metric))?;
    let anti = check_antilinear_witness(h, Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, 1.1))
        .map_err(e)?;
    ensure(anti.metric.abs() < 1e-12, format!("antilinear witness {}", anti.metric))?;
    Ok(format!("dead {dead:.4} (predicted 0.8), witness {:.15}", witness.metric))
}

fn decoupling() -> Outcome {
    let started = Instant::now();
    let rows = decoupling_sweep(10, 20, 1618, Execution::Parallel).map_err(e)?;
    let (f1, f9) = (rows[1].feasible_fraction, rows[9].feasible_fraction);
    ensure(f9 >= 0.9, format!("feasible fraction at k=9 is {f9}"))?;
    ensure(f1 <= 0.1, format!("feasible fraction at k=1 is {f1}"))?;
    let crossing = feasibility_crossing(&rows).ok_or("no 50% crossing")?;
    ensure((3.0..=7.0).contains(&crossing), format!("crossing at k={crossing}"))?;
    within_time(started, Duration::from_secs(300))?;
    Ok(format!("k=1: {f1}, k=9: {f9}, crossing k={crossing:.2}"))
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_reality-steer"))
        .args(args)
        .output()
        .map_err(e)?;
    ensure(
        out.status.success(),
        format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)),
    )?;
    Ok(out.stdout)
}

fn payload(bytes: &[u8]) -> Result<String, String> {
    let v: serde_json::Value = serde_json::from_slice(bytes).map_err(e)?;
    serde_json::to_string(&v["payload"]).map_err(e)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        "[scenario]\nrng_seed = 99\n\n[run]\nnum_trials = 5000\nemit_per_trial = true\n",
    )
    .map_err(e)?;
    let cfg = cfg.to_str().ok_or("path")?;
    let a = payload(&run_cli(&["run", cfg])?)?;
    let b = payload(&run_cli(&["run", cfg])?)?;
    let serial = payload(&run_cli(&["run", cfg, "--threads", "1"])?)?;
    ensure(a == b, "repeated runs differ")?;
    ensure(a == serial, "serial and parallel payloads differ")?;
    let one = run_cli(&["run", cfg, "--trials", "1"])?;
    ensure(payload(&one)? == payload(&run_cli(&["run", cfg, "--trials", "1"])?)?, "trials=1 differs")?;
    Ok(format!("{} payload bytes identical across 3 runs", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("ghz_circuit_equivalence", ghz_equivalence),
        ("erasure_exactness", erasure_exactness),
        ("no_signalling", no_signalling),
        ("indistinguishability", indistinguishability),
        ("coordination", coordination),
        ("born_statistics", born_statistics),
        ("nonlinear_filter", nonlinear_filter),
        ("decoupling_sweep", decoupling),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let started = Instant::now();
        let outcome = check();
        let t = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name:<26} {detail} [{t:.2}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name:<26} {why} [{t:.2}s]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
