//! End-to-end trials: prepare, observe, spread, clinic, re-observe.
//!
//! Everything that does not depend on the random draws is computed once per
//! scenario in [`PreparedScenario`]; a trial then only draws Bob's pre- and
//! post-clinic records.

use serde::{Deserialize, Serialize};

use super::scenario::{names, BranchLabel, Participation, Scenario};
use super::steps::{
    condition_on_visit, conditional_clinic, initial_state, observe, records_consistent,
    reobserve_coupling, spread_to_environment,
};
use crate::channels::{apply_nonlinear_filter, NonlinearFilter};
use crate::error::{Error, Result};
use crate::par::{try_map_indices, Execution};
use crate::statevec::{
    partial_trace, project, rng_from_seed, sample_index, trial_seed, uniform, ProbabilityTable,
    RegisterLayout, StateVector,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub trial_index: u64,
    pub seed: u64,
    pub pre_outcome: BranchLabel,
    pub post_outcome: BranchLabel,
    pub switched: bool,
    /// Bob visited the clinic in the branch he first observed.
    pub erased: bool,
    pub brain_purity_after_erase: f64,
    pub brain_entropy_after_erase: f64,
    pub cat_marginal_before: ProbabilityTable,
    pub cat_marginal_after: ProbabilityTable,
    pub memory_consistent: bool,
}

/// Scenario with all deterministic intermediate states evaluated.
#[derive(Clone, Debug)]
pub struct PreparedScenario {
    scenario: Scenario,
    layout: RegisterLayout,
    observed: StateVector,
    after_clinic: StateVector,
    /// Distribution of Bob's first record.
    pre_distribution: Vec<f64>,
    /// Distribution of the re-observed record, given a clinic visit.
    post_distribution: Vec<f64>,
    /// Indexed by record value: consistency of the projected branch.
    consistent_if_erased: Vec<bool>,
    consistent_if_kept: Vec<bool>,
    participating: Vec<bool>,
    brain_purity: f64,
    brain_entropy: f64,
    cat_before: ProbabilityTable,
    cat_after: ProbabilityTable,
}

fn marginal(state: &StateVector, layout: &RegisterLayout, name: &str) -> Result<Vec<f64>> {
    Ok(state.marginal(layout.qubits(name)?))
}

impl PreparedScenario {
    pub fn new(scenario: &Scenario) -> Result<Self> {
        scenario.validate()?;
        let layout = scenario.layout()?;
        let encoding = scenario.encoding;
        let branches = &scenario.branches;
        let initial = initial_state(branches, &layout)?;
        let observed = observe(&initial, &layout, scenario.observe_variant, encoding)?;
        let observed = spread_to_environment(&observed, &layout, scenario.env_qubits - 1)?;

        let filtered = match scenario.nonlinear_lambda {
            Some(lambda) => {
                let filter = NonlinearFilter::new(lambda, names::BRAIN)?;
                apply_nonlinear_filter(&observed, &layout, &filter)?
            }
            None => observed.clone(),
        };
        let after_clinic = conditional_clinic(
            &filtered,
            &layout,
            branches,
            scenario.participation,
            encoding,
        )?;

        let width = 1usize << branches.cat_width();
        let mut participating = vec![false; width];
        for v in branches.participating_values(scenario.participation) {
            participating[v] = true;
        }

        let pre_distribution = marginal(&observed, &layout, names::BRAIN)?;
        let visited = match condition_on_visit(&after_clinic, &layout) {
            Ok(s) => Some(reobserve_coupling(&s, &layout, encoding)?),
            Err(Error::ZeroProbability) => None,
            Err(e) => return Err(e),
        };
        let post_distribution = match &visited {
            Some(s) => marginal(s, &layout, names::BRAIN)?,
            None => vec![0.0; width],
        };

        let mut consistent_if_erased = vec![false; width];
        let mut consistent_if_kept = vec![false; width];
        for v in 0..width {
            if let Some(s) = visited.as_ref().filter(|_| post_distribution[v] > 0.0) {
                let branch = project(s, &layout, names::BRAIN, v)?;
                consistent_if_erased[v] = records_consistent(&branch, &layout, encoding, v, true)?;
            }
            if pre_distribution[v] > 0.0 && !participating[v] {
                let branch = project(&observed, &layout, names::BRAIN, v)?;
                consistent_if_kept[v] = records_consistent(&branch, &layout, encoding, v, false)?;
            }
        }

        let rho_b = partial_trace(&after_clinic, &layout, encoding.brain_subsystems())?;
        Ok(Self {
            cat_before: ProbabilityTable::new(marginal(&observed, &layout, names::CAT)?),
            cat_after: ProbabilityTable::new(marginal(&after_clinic, &layout, names::CAT)?),
            brain_purity: rho_b.purity(),
            brain_entropy: rho_b.von_neumann_entropy(),
            scenario: scenario.clone(),
            layout,
            observed,
            after_clinic,
            pre_distribution,
            post_distribution,
            consistent_if_erased,
            consistent_if_kept,
            participating,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    /// Global state after observation and spreading.
    pub fn observed(&self) -> &StateVector {
        &self.observed
    }

    /// Global state after the (optional) filter and the clinic, before any
    /// conditioning on the draws.
    pub fn after_clinic(&self) -> &StateVector {
        &self.after_clinic
    }

    pub fn pre_distribution(&self) -> &[f64] {
        &self.pre_distribution
    }

    pub fn post_distribution(&self) -> &[f64] {
        &self.post_distribution
    }

    /// Exact distribution of the final record, marginalised over the first.
    pub fn final_distribution(&self) -> Vec<f64> {
        let visit: f64 = self
            .pre_distribution
            .iter()
            .zip(&self.participating)
            .filter(|(_, &p)| p)
            .map(|(q, _)| q)
            .sum();
        self.pre_distribution
            .iter()
            .zip(&self.post_distribution)
            .zip(&self.participating)
            .map(|((&pre, &post), &p)| visit * post + if p { 0.0 } else { pre })
            .collect()
    }

    fn label(&self, value: usize) -> Result<BranchLabel> {
        self.scenario
            .branches
            .label(value)
            .ok_or_else(|| Error::Precondition(format!("record value {value} names no branch")))
    }

    /// One trial driven by `seed`.
    pub fn trial(&self, trial_index: u64, seed: u64) -> Result<TrialReport> {
        let mut rng = rng_from_seed(seed);
        let pre = sample_index(&self.pre_distribution, uniform(&mut rng))
            .ok_or(Error::ZeroProbability)?;
        let erased = self.participating[pre];
        let (post, memory_consistent) = if erased {
            let post = sample_index(&self.post_distribution, uniform(&mut rng))
                .ok_or(Error::ZeroProbability)?;
            (post, self.consistent_if_erased[post])
        } else {
            (pre, self.consistent_if_kept[pre])
        };
        Ok(TrialReport {
            trial_index,
            seed,
            pre_outcome: self.label(pre)?,
            post_outcome: self.label(post)?,
            switched: pre != post,
            erased,
            brain_purity_after_erase: self.brain_purity,
            brain_entropy_after_erase: self.brain_entropy,
            cat_marginal_before: self.cat_before.clone(),
            cat_marginal_after: self.cat_after.clone(),
            memory_consistent,
        })
    }

    /// `count` trials seeded with `trial_seed(rng_seed, i)`.
    pub fn ensemble(&self, count: u64, exec: Execution) -> Result<Vec<TrialReport>> {
        let base = self.scenario.rng_seed;
        try_map_indices(count, exec, |i| self.trial(i, trial_seed(base, i)))
    }
}

/// Single trial seeded directly by the scenario's `rng_seed`.
pub fn run_trial(scenario: &Scenario) -> Result<TrialReport> {
    PreparedScenario::new(scenario)?.trial(0, scenario.rng_seed)
}

pub fn run_ensemble(scenario: &Scenario, count: u64, exec: Execution) -> Result<Vec<TrialReport>> {
    PreparedScenario::new(scenario)?.ensemble(count, exec)
}

/// Closed-form distribution of Bob's final record over branch values.
///
/// Without a filter, participating branches redistribute their total weight
/// in proportion to `|w|^2` and the others keep theirs; with a filter of
/// strength `l` on a two-branch cat the dead weight is rescaled by `l^2`.
pub fn analytic_post_distribution(scenario: &Scenario) -> Result<Vec<f64>> {
    scenario.validate()?;
    let branches = &scenario.branches;
    let p = branches.probabilities();
    if let Some(lambda) = scenario.nonlinear_lambda {
        let (p0, p1) = (p[0], lambda * lambda * p[1]);
        let z = p0 + p1;
        if z == 0.0 {
            return Err(Error::DegenerateFilter);
        }
        return Ok(vec![p0 / z, p1 / z]);
    }
    let inside: Vec<bool> = (0..p.len())
        .map(|v| {
            scenario.participation == Participation::All
                || branches.label(v).is_some_and(|l| scenario.participation.includes(l.family))
        })
        .collect();
    let mass: f64 = p.iter().zip(&inside).filter(|(_, &i)| i).map(|(x, _)| x).sum();
    Ok(p.iter()
        .zip(&inside)
        .map(|(&x, &i)| if i { mass * x / mass.max(f64::MIN_POSITIVE) } else { x })
        .collect())
}

/// Outcome counts over an ensemble.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub trials: u64,
    pub pre_counts: Vec<u64>,
    pub post_counts: Vec<u64>,
    pub switched: u64,
    pub erased: u64,
    pub memory_consistent: u64,
}

impl EnsembleSummary {
    pub fn from_reports(scenario: &Scenario, reports: &[TrialReport]) -> Self {
        let n = scenario.branches.num_branches();
        let mut s = Self {
            pre_counts: vec![0; n],
            post_counts: vec![0; n],
            ..Self::default()
        };
        for r in reports {
            s.trials += 1;
            s.pre_counts[scenario.branches.value(r.pre_outcome)] += 1;
            s.post_counts[scenario.branches.value(r.post_outcome)] += 1;
            s.switched += u64::from(r.switched);
            s.erased += u64::from(r.erased);
            s.memory_consistent += u64::from(r.memory_consistent);
        }
        s
    }

    pub fn post_frequencies(&self) -> Vec<f64> {
        let n = self.trials.max(1) as f64;
        self.post_counts.iter().map(|&c| c as f64 / n).collect()
    }

    pub fn pre_frequencies(&self) -> Vec<f64> {
        let n = self.trials.max(1) as f64;
        self.pre_counts.iter().map(|&c| c as f64 / n).collect()
    }
}
