//! Executable checks with machine-readable verdicts.
//!
//! Each check returns a [`Verdict`] whose `passed` flag is derived from its
//! metric and tolerance only. Violated internal cross-checks and invalid
//! inputs are errors, not failing verdicts.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channels::{
    apply_antilinear, apply_local_channel, apply_nonlinear_filter, nonlinear_probabilities,
    random_channel, KrausChannel, NonlinearFilter,
};
use crate::error::{Error, Result};
use crate::par::{try_map_indices, Execution};
use crate::protocol::{
    analytic_post_distribution, clinic_erase, conditional_clinic, initial_state, names, observe,
    protocol_layout, reobserve_coupling, spread_to_environment, BranchStructure, EnsembleSummary,
    ObserveVariant, Participation, PreparedScenario, RecordEncoding, Scenario,
};
use crate::stats::chi_square_gof;
use crate::statevec::random::random_state;
use crate::statevec::{
    init_register, partial_trace, rng_from_seed, trace_distance, trial_seed, Gate,
    RegisterLayout, StateVector,
};

pub const EXACT_TOLERANCE: f64 = 1e-12;
pub const INVARIANT_TOLERANCE: f64 = 1e-10;
pub const SIGNIFICANCE: f64 = 0.001;
pub const MIN_TRIALS: u64 = 1000;
/// Residual brain entropy above which steering counts as blocked.
pub const BLOCKED_ENTROPY_BITS: f64 = 0.5;
pub const WITNESS_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Comparison {
    /// Pass when `metric < tolerance`.
    Below,
    /// Pass when `metric > tolerance`.
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub check_name: String,
    pub passed: bool,
    pub metric: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub details: String,
}

impl Verdict {
    pub fn new(
        check_name: impl Into<String>,
        metric: f64,
        tolerance: f64,
        comparison: Comparison,
        details: impl Into<String>,
    ) -> Self {
        let passed = match comparison {
            Comparison::Below => metric < tolerance,
            Comparison::Above => metric > tolerance,
        };
        Self {
            check_name: check_name.into(),
            passed,
            metric,
            tolerance,
            comparison,
            details: details.into(),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.comparison {
            Comparison::Below => "<",
            Comparison::Above => ">",
        };
        write!(
            f,
            "{:<22} {:<4} metric={:.3e} {op} {:.1e}  {}",
            self.check_name,
            if self.passed { "PASS" } else { "FAIL" },
            self.metric,
            self.tolerance,
            self.details
        )
    }
}

fn brain_state(
    state: &StateVector,
    layout: &RegisterLayout,
    encoding: RecordEncoding,
) -> Result<crate::statevec::DensityMatrix> {
    partial_trace(state, layout, encoding.brain_subsystems())
}

/// Observation variants a, b, c on the canonical `|+>` cat.
pub fn check_circuit_equivalence() -> Result<Verdict> {
    check_circuit_equivalence_for(&BranchStructure::canonical(), RecordEncoding::Plain)
}

/// Largest amplitude deviation among the three observation variants and the
/// explicit GHZ-type state `sum_k w_k |k, rec_k, rec_k>`.
pub fn check_circuit_equivalence_for(
    branches: &BranchStructure,
    encoding: RecordEncoding,
) -> Result<Verdict> {
    let layout = protocol_layout(branches.cat_width(), encoding, 1)?;
    let init = initial_state(branches, &layout)?;
    let states = [ObserveVariant::A, ObserveVariant::B, ObserveVariant::C]
        .into_iter()
        .map(|v| observe(&init, &layout, v, encoding))
        .collect::<Result<Vec<_>>>()?;
    let w = branches.cat_width();
    let mut ghz = vec![Complex64::new(0.0, 0.0); 1 << layout.total_qubits()];
    for (k, &weight) in branches.weights().iter().enumerate() {
        let bits = format!("{k:0w$b}");
        let mut label = format!("C={bits},B={bits},E1={bits}");
        if encoding.is_tagged() {
            label.push_str(",BF=1");
        }
        let basis = init_register(&layout, &label)?;
        for (a, b) in ghz.iter_mut().zip(basis.amplitudes()) {
            *a += weight * b;
        }
    }
    let ghz = StateVector::from_amplitudes(ghz)?;
    let metric = states
        .iter()
        .flat_map(|s| states.iter().map(move |t| s.max_abs_diff(t)))
        .chain(states.iter().map(|s| s.max_abs_diff(&ghz)))
        .fold(0.0, f64::max);
    Ok(Verdict::new(
        "circuit_equivalence",
        metric,
        EXACT_TOLERANCE,
        Comparison::Below,
        "max amplitude deviation across variants a/b/c and the GHZ-type target",
    ))
}

/// Clinic erase on the observed state against the explicit post-erasure
/// state, plus the brain's purity.
pub fn check_erasure(branches: &BranchStructure, encoding: RecordEncoding) -> Result<Verdict> {
    let layout = protocol_layout(branches.cat_width(), encoding, 1)?;
    let init = initial_state(branches, &layout)?;
    let observed = observe(&init, &layout, ObserveVariant::A, encoding)?;
    let erased = clinic_erase(&observed, &layout, encoding)?;
    let w = branches.cat_width();
    let mut target = vec![Complex64::new(0.0, 0.0); 1 << layout.total_qubits()];
    for (k, &weight) in branches.weights().iter().enumerate() {
        let bits = format!("{k:0w$b}");
        let mut label = format!("C={bits},E1={bits},A={bits},F=1");
        if encoding.is_tagged() {
            label.push_str(",AF=1");
        }
        let basis = init_register(&layout, &label)?;
        for (a, b) in target.iter_mut().zip(basis.amplitudes()) {
            *a += weight * b;
        }
    }
    let deviation = erased.max_abs_diff(&StateVector::from_amplitudes(target)?);
    let purity = brain_state(&erased, &layout, encoding)?.purity();
    let metric = deviation.max((1.0 - purity).abs());
    Ok(Verdict::new(
        "erasure",
        metric,
        EXACT_TOLERANCE,
        Comparison::Below,
        format!("state deviation {deviation:.2e}, brain purity {purity:.15}"),
    ))
}

/// Reduced cat state under `num_random_channels` random channels on `B`,
/// each applied to as many random `C ⊗ B` states, plus the identity channel
/// and the clinic operations.
pub fn check_no_signalling(num_random_channels: usize, rng_seed: u64) -> Result<Verdict> {
    check_no_signalling_with(num_random_channels, rng_seed, Execution::Parallel)
}

pub fn check_no_signalling_with(
    num_random_channels: usize,
    rng_seed: u64,
    exec: Execution,
) -> Result<Verdict> {
    if num_random_channels == 0 {
        return Err(Error::Precondition("at least one channel is required".into()));
    }
    let n = num_random_channels as u64;
    let channel_seed = trial_seed(rng_seed, 0);
    let state_seed = trial_seed(rng_seed, 1);
    let mut channels = vec![KrausChannel::identity(1)];
    for i in 0..n {
        channels.push(random_channel(1, (i % 4) as usize + 1, trial_seed(channel_seed, i))?);
    }
    let pair = RegisterLayout::new(&[("C", 1), ("B", 1)])?;
    let states = (0..n)
        .map(|i| random_state(2, &mut rng_from_seed(trial_seed(state_seed, i))))
        .collect::<Result<Vec<_>>>()?;

    let channel_max = try_map_indices(channels.len() as u64, exec, |c| {
        let channel = &channels[c as usize];
        states.iter().try_fold(0.0f64, |acc, s| {
            let before = partial_trace(s, &pair, &["C"])?;
            let after = apply_local_channel(s, &pair, "B", channel)?;
            Ok(acc.max(trace_distance(&before, &partial_trace(&after, &pair, &["C"])?)?))
        })
    })?
    .into_iter()
    .fold(0.0, f64::max);

    // clinic operations act on B ⊗ A ⊗ F only
    let branches = BranchStructure::canonical();
    let layout = protocol_layout(1, RecordEncoding::Plain, 1)?;
    let blank = StateVector::basis_state(2, 0)?;
    let clinic_max = try_map_indices(n, exec, |i| {
        let s = random_state(3, &mut rng_from_seed(trial_seed(state_seed, n + i)))?.tensor(&blank)?;
        let before = partial_trace(&s, &layout, &[names::CAT])?;
        let erased = clinic_erase(&s, &layout, RecordEncoding::Plain)?;
        let partial = conditional_clinic(
            &s,
            &layout,
            &branches,
            Participation::DeadOnly,
            RecordEncoding::Plain,
        )?;
        let a = trace_distance(&before, &partial_trace(&erased, &layout, &[names::CAT])?)?;
        let b = trace_distance(&before, &partial_trace(&partial, &layout, &[names::CAT])?)?;
        Ok::<_, Error>(a.max(b))
    })?
    .into_iter()
    .fold(0.0, f64::max);

    Ok(Verdict::new(
        "no_signalling",
        channel_max.max(clinic_max),
        INVARIANT_TOLERANCE,
        Comparison::Below,
        format!(
            "{} channels x {n} states: {channel_max:.2e}; clinic pipelines: {clinic_max:.2e}",
            channels.len()
        ),
    ))
}

/// Bob's reduced state after observation alone versus after observation,
/// erasure and a fresh record write.
pub fn check_indistinguishability(scenario: &Scenario) -> Result<Verdict> {
    scenario.validate()?;
    if scenario.nonlinear_lambda.is_some_and(|l| l != 1.0) {
        return Err(Error::Precondition(
            "indistinguishability holds for linear evolution only (lambda must be absent or 1)"
                .into(),
        ));
    }
    if scenario.participation != Participation::All {
        return Err(Error::Precondition(
            "indistinguishability needs participation = all".into(),
        ));
    }
    let layout = scenario.layout()?;
    let encoding = scenario.encoding;
    let init = initial_state(&scenario.branches, &layout)?;
    let observed = observe(&init, &layout, scenario.observe_variant, encoding)?;
    let observed = spread_to_environment(&observed, &layout, scenario.env_qubits - 1)?;
    let steered = reobserve_coupling(&clinic_erase(&observed, &layout, encoding)?, &layout, encoding)?;
    let metric = trace_distance(
        &brain_state(&observed, &layout, encoding)?,
        &brain_state(&steered, &layout, encoding)?,
    )?;
    Ok(Verdict::new(
        "indistinguishability",
        metric,
        INVARIANT_TOLERANCE,
        Comparison::Below,
        "trace distance of Bob's record with and without the clinic round trip",
    ))
}

/// Brain entropy after the clinic stage. Partial participation must leave
/// it entangled; full participation must leave it pure.
pub fn check_coordination(scenario: &Scenario) -> Result<Verdict> {
    scenario.validate()?;
    if !scenario.encoding.is_tagged() {
        return Err(Error::Precondition(
            "coordination is assessed with the tagged encoding".into(),
        ));
    }
    let layout = scenario.layout()?;
    let encoding = scenario.encoding;
    let init = initial_state(&scenario.branches, &layout)?;
    let observed = observe(&init, &layout, scenario.observe_variant, encoding)?;
    let observed = spread_to_environment(&observed, &layout, scenario.env_qubits - 1)?;
    let clinic = conditional_clinic(
        &observed,
        &layout,
        &scenario.branches,
        scenario.participation,
        encoding,
    )?;
    let entropy = brain_state(&clinic, &layout, encoding)?.von_neumann_entropy();
    Ok(if scenario.participation == Participation::All {
        Verdict::new(
            "coordination",
            entropy,
            INVARIANT_TOLERANCE,
            Comparison::Below,
            "all branches participate: steering enabled",
        )
    } else {
        Verdict::new(
            "coordination",
            entropy,
            BLOCKED_ENTROPY_BITS,
            Comparison::Above,
            "partial participation: steering blocked",
        )
    })
}

/// Probability that re-observation after a clinic visit lands outside the
/// participating family.
pub fn check_branch_restriction(scenario: &Scenario) -> Result<Verdict> {
    if scenario.participation == Participation::All {
        return Err(Error::Precondition(
            "branch restriction needs partial participation".into(),
        ));
    }
    let prepared = PreparedScenario::new(scenario)?;
    let allowed = scenario.branches.participating_values(scenario.participation);
    let outside: f64 = prepared
        .post_distribution()
        .iter()
        .enumerate()
        .filter(|(v, _)| !allowed.contains(v))
        .map(|(_, p)| p)
        .sum();
    Ok(Verdict::new(
        "branch_restriction",
        outside,
        EXACT_TOLERANCE,
        Comparison::Below,
        "post-visit probability outside the participating family",
    ))
}

fn weighted_ghz(c0: Complex64, c1: Complex64) -> Result<(RegisterLayout, StateVector)> {
    let layout = RegisterLayout::new(&[("C", 1), ("B", 1), ("E", 1)])?;
    let zero = Complex64::new(0.0, 0.0);
    let state = StateVector::from_amplitudes(vec![c0, zero, zero, zero, zero, zero, zero, c1])?;
    Ok((layout, state))
}

/// Change of the cat's reduced state under the nonlinear filter on Bob.
///
/// A witness is expected exactly when `lambda != 1` and both weights are
/// non-zero; the verdict passes when the metric matches that expectation.
pub fn check_nonlinear_witness(lambda: f64, c0: Complex64, c1: Complex64) -> Result<Verdict> {
    let (expected0, expected1) = nonlinear_probabilities(c0, c1, lambda)?;
    let (layout, state) = weighted_ghz(c0, c1)?;
    let filtered = apply_nonlinear_filter(&state, &layout, &NonlinearFilter::new(lambda, "B")?)?;
    let before = partial_trace(&state, &layout, &["C"])?;
    let after = partial_trace(&filtered, &layout, &["C"])?;
    let diag = after.diagonal();
    let mismatch = (diag[0] - expected0).abs().max((diag[1] - expected1).abs());
    if mismatch > EXACT_TOLERANCE {
        return Err(Error::CrossCheck(format!(
            "filtered marginals {diag:?} differ from closed form ({expected0}, {expected1})"
        )));
    }
    let metric = trace_distance(&before, &after)?;
    let expect_violation = lambda != 1.0 && c0.norm_sqr() * c1.norm_sqr() > 0.0;
    Ok(if expect_violation {
        Verdict::new(
            "nonlinear_witness",
            metric,
            WITNESS_THRESHOLD,
            Comparison::Above,
            format!("violation witnessed; cat marginals ({expected0:.6}, {expected1:.6})"),
        )
    } else {
        Verdict::new(
            "nonlinear_witness",
            metric,
            INVARIANT_TOLERANCE,
            Comparison::Below,
            "no violation expected",
        )
    })
}

/// Complex conjugation followed by `X` on Bob: the cat's reduced state
/// must not change.
pub fn check_antilinear_witness(c0: Complex64, c1: Complex64) -> Result<Verdict> {
    let (layout, state) = weighted_ghz(c0, c1)?;
    let mapped = apply_antilinear(&state, Some(&Gate::X(1)))?;
    let metric = trace_distance(
        &partial_trace(&state, &layout, &["C"])?,
        &partial_trace(&mapped, &layout, &["C"])?,
    )?;
    Ok(Verdict::new(
        "antilinear_witness",
        metric,
        EXACT_TOLERANCE,
        Comparison::Below,
        "antilinear map preserves branch probabilities",
    ))
}

/// Chi-square fit of sampled final records against the closed-form
/// distribution (Born weights, or the filtered weights when a filter is set).
pub fn born_statistics_test(scenario: &Scenario, num_trials: u64, exec: Execution) -> Result<Verdict> {
    let expected = analytic_post_distribution(scenario)?;
    born_statistics_against(scenario, num_trials, &expected, exec)
}

pub fn born_statistics_against(
    scenario: &Scenario,
    num_trials: u64,
    expected: &[f64],
    exec: Execution,
) -> Result<Verdict> {
    if num_trials < MIN_TRIALS {
        return Err(Error::Precondition(format!(
            "statistical tests need at least {MIN_TRIALS} trials, got {num_trials}"
        )));
    }
    let reports = PreparedScenario::new(scenario)?.ensemble(num_trials, exec)?;
    let summary = EnsembleSummary::from_reports(scenario, &reports);
    let fit = chi_square_gof(&summary.post_counts, expected)?;
    Ok(Verdict::new(
        "born_statistics",
        fit.p_value,
        SIGNIFICANCE,
        Comparison::Above,
        format!(
            "{num_trials} trials, post frequencies {:?}, chi2={:.3} dof={}",
            summary
                .post_frequencies()
                .iter()
                .map(|f| (f * 1e4).round() / 1e4)
                .collect::<Vec<_>>(),
            fit.statistic,
            fit.dof
        ),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    CircuitEquivalence,
    NoSignalling,
    Indistinguishability,
    Coordination,
    NonlinearWitness,
    BornStatistics,
    Erasure,
    BranchRestriction,
    AntilinearWitness,
}

impl CheckName {
    /// The checks run by the `all` selector.
    pub const CORE: [CheckName; 6] = [
        CheckName::CircuitEquivalence,
        CheckName::NoSignalling,
        CheckName::Indistinguishability,
        CheckName::Coordination,
        CheckName::NonlinearWitness,
        CheckName::BornStatistics,
    ];

    pub const EXTRA: [CheckName; 3] = [
        CheckName::Erasure,
        CheckName::BranchRestriction,
        CheckName::AntilinearWitness,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckName::CircuitEquivalence => "circuit_equivalence",
            CheckName::NoSignalling => "no_signalling",
            CheckName::Indistinguishability => "indistinguishability",
            CheckName::Coordination => "coordination",
            CheckName::NonlinearWitness => "nonlinear_witness",
            CheckName::BornStatistics => "born_statistics",
            CheckName::Erasure => "erasure",
            CheckName::BranchRestriction => "branch_restriction",
            CheckName::AntilinearWitness => "antilinear_witness",
        }
    }

    /// Expands selectors; `all` stands for [`CheckName::CORE`].
    pub fn parse_selectors<S: AsRef<str>>(selectors: &[S]) -> Result<Vec<CheckName>> {
        let mut out = Vec::new();
        for s in selectors {
            let s = s.as_ref().trim();
            let add: Vec<CheckName> = if s == "all" {
                Self::CORE.to_vec()
            } else {
                vec![s.parse()?]
            };
            for c in add {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::CORE
            .into_iter()
            .chain(Self::EXTRA)
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown check `{s}`")))
    }
}

pub const SUITE_RANDOM_CHANNELS: usize = 100;
pub const SUITE_BORN_TRIALS: u64 = 100_000;

/// Runs `checks` on their standard inputs.
pub fn run_check(check: CheckName, rng_seed: u64, exec: Execution) -> Result<Verdict> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    match check {
        CheckName::CircuitEquivalence => check_circuit_equivalence(),
        CheckName::NoSignalling => check_no_signalling_with(SUITE_RANDOM_CHANNELS, rng_seed, exec),
        CheckName::Indistinguishability => check_indistinguishability(&Scenario::canonical()),
        CheckName::Coordination => check_coordination(
            &Scenario::canonical()
                .with_encoding(RecordEncoding::Tagged)
                .with_participation(Participation::DeadOnly),
        ),
        CheckName::NonlinearWitness => check_nonlinear_witness(2.0, h, h),
        CheckName::BornStatistics => born_statistics_test(
            &Scenario::canonical().with_seed(rng_seed),
            SUITE_BORN_TRIALS,
            exec,
        ),
        CheckName::Erasure => check_erasure(&BranchStructure::canonical(), RecordEncoding::Tagged),
        CheckName::BranchRestriction => check_branch_restriction(
            &Scenario::canonical()
                .with_branches(BranchStructure::uniform(2, 2)?)
                .with_encoding(RecordEncoding::Tagged)
                .with_participation(Participation::DeadOnly),
        ),
        CheckName::AntilinearWitness => {
            check_antilinear_witness(h, Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, 0.7))
        }
    }
}

pub fn run_suite(checks: &[CheckName], rng_seed: u64, exec: Execution) -> Result<Vec<Verdict>> {
    checks.iter().map(|&c| run_check(c, rng_seed, exec)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn verdict_pass_is_derived() {
        assert!(Verdict::new("x", 0.1, 0.2, Comparison::Below, "").passed);
        assert!(!Verdict::new("x", 0.3, 0.2, Comparison::Below, "").passed);
        assert!(Verdict::new("x", 0.3, 0.2, Comparison::Above, "").passed);
    }

    #[test]
    fn circuit_equivalence_canonical_and_deterministic() {
        assert!(check_circuit_equivalence().unwrap().passed);
        let alive = BranchStructure::from_alive_probability(1.0).unwrap();
        assert!(check_circuit_equivalence_for(&alive, RecordEncoding::Plain).unwrap().passed);
        let four = BranchStructure::uniform(2, 2).unwrap();
        assert!(check_circuit_equivalence_for(&four, RecordEncoding::Tagged).unwrap().passed);
    }

    #[test]
    fn nonlinear_witness_values() {
        let h = c(std::f64::consts::FRAC_1_SQRT_2);
        let v = check_nonlinear_witness(2.0, h, h).unwrap();
        assert!(v.passed);
        assert!((v.metric - 0.3).abs() < 1e-12);
        let id = check_nonlinear_witness(1.0, h, h).unwrap();
        assert!(id.passed && id.metric < 1e-15);
        assert_eq!(
            check_nonlinear_witness(0.0, c(0.0), c(1.0)),
            Err(Error::DegenerateFilter)
        );
    }

    #[test]
    fn antilinear_witness_zero() {
        let v = check_antilinear_witness(c(0.6), Complex64::new(0.0, 0.8)).unwrap();
        assert!(v.passed && v.metric < 1e-15);
    }

    #[test]
    fn coordination_plain_needs_tagged() {
        assert!(check_coordination(&Scenario::canonical()).is_err());
        let dead_only = Scenario::canonical()
            .with_encoding(RecordEncoding::Tagged)
            .with_participation(Participation::DeadOnly);
        let v = check_coordination(&dead_only).unwrap();
        assert!(v.passed && (v.metric - 1.0).abs() < 1e-9);
        let all = Scenario::canonical().with_encoding(RecordEncoding::Tagged);
        assert!(check_coordination(&all).unwrap().passed);
    }

    #[test]
    fn indistinguishability_preconditions() {
        assert!(check_indistinguishability(&Scenario::canonical()).unwrap().passed);
        assert!(check_indistinguishability(&Scenario::canonical().with_lambda(Some(2.0))).is_err());
        assert!(check_indistinguishability(&Scenario::canonical().with_lambda(Some(1.0))).is_ok());
        let partial = Scenario::canonical().with_participation(Participation::DeadOnly);
        assert!(check_indistinguishability(&partial).is_err());
    }

    #[test]
    fn small_no_signalling() {
        let v = check_no_signalling_with(5, 3, Execution::Sequential).unwrap();
        assert!(v.passed, "{v}");
        assert!(check_no_signalling(0, 1).is_err());
    }

    #[test]
    fn born_requires_enough_trials() {
        assert!(born_statistics_test(&Scenario::canonical(), 999, Execution::Sequential).is_err());
    }

    #[test]
    fn selectors() {
        assert_eq!(CheckName::parse_selectors(&["all"]).unwrap().len(), 6);
        assert_eq!(
            CheckName::parse_selectors(&["no_signalling"]).unwrap(),
            vec![CheckName::NoSignalling]
        );
        assert!(CheckName::parse_selectors(&["bogus"]).is_err());
    }
}
