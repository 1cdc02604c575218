use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{RegisterLayout, MAX_QUBITS, NORM_TOLERANCE};

/// Subsystem names used by the protocol layouts.
pub mod names {
    pub const CAT: &str = "C";
    pub const BRAIN_FLAG: &str = "BF";
    pub const BRAIN: &str = "B";
    pub const ANCILLA_FLAG: &str = "AF";
    pub const ANCILLA: &str = "A";
    pub const CLINIC_FLAG: &str = "F";

    pub fn env(i: usize) -> String {
        format!("E{}", i + 1)
    }
}

/// How outcome records are written into a memory register.
///
/// `Plain` uses the bare record value (`blank = a = |0>`, `d = |1>` for two
/// branches). `Tagged` adds a flag qubit set on observation, so `blank = |00>`,
/// `a = |10>`, `d = |11>` are mutually orthogonal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordEncoding {
    #[default]
    Plain,
    Tagged,
}

impl RecordEncoding {
    pub fn is_tagged(self) -> bool {
        self == RecordEncoding::Tagged
    }

    pub fn brain_subsystems(self) -> &'static [&'static str] {
        match self {
            RecordEncoding::Plain => &[names::BRAIN],
            RecordEncoding::Tagged => &[names::BRAIN_FLAG, names::BRAIN],
        }
    }

    pub fn ancilla_subsystems(self) -> &'static [&'static str] {
        match self {
            RecordEncoding::Plain => &[names::ANCILLA],
            RecordEncoding::Tagged => &[names::ANCILLA_FLAG, names::ANCILLA],
        }
    }
}

/// Which of the three equivalent observation circuits to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObserveVariant {
    /// Cat controls both the brain and the environment record.
    #[default]
    A,
    /// Cat writes the brain, brain informs the environment.
    B,
    /// Cat writes the environment, environment informs the brain.
    C,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Participation {
    #[default]
    All,
    DeadOnly,
    AliveOnly,
}

impl Participation {
    pub fn includes(self, family: Family) -> bool {
        match self {
            Participation::All => true,
            Participation::DeadOnly => family == Family::Dead,
            Participation::AliveOnly => family == Family::Alive,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Alive,
    Dead,
}

/// A branch of the cat: `index` counts within its family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchLabel {
    pub family: Family,
    pub index: usize,
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let family = match self.family {
            Family::Alive => "alive",
            Family::Dead => "dead",
        };
        write!(f, "{family}{}", self.index)
    }
}

/// Alive and dead branch families with their amplitudes.
///
/// Branch `k` is stored on cat basis state `|k>`: alive branches take
/// `0..num_alive`, dead branches follow. The cat register is
/// `ceil(log2(num_alive + num_dead))` qubits wide (at least one).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BranchStructure {
    num_alive: usize,
    num_dead: usize,
    weights: Vec<Complex64>,
}

impl BranchStructure {
    pub fn new(num_alive: usize, num_dead: usize, weights: Vec<Complex64>) -> Result<Self> {
        if num_alive == 0 || num_dead == 0 {
            return Err(Error::InvalidBranches(
                "need at least one alive and one dead branch".into(),
            ));
        }
        if weights.len() != num_alive + num_dead {
            return Err(Error::InvalidBranches(format!(
                "{} weights for {} branches",
                weights.len(),
                num_alive + num_dead
            )));
        }
        if weights.iter().any(|w| !w.re.is_finite() || !w.im.is_finite()) {
            return Err(Error::InvalidBranches("non-finite weight".into()));
        }
        let norm_sqr: f64 = weights.iter().map(Complex64::norm_sqr).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidBranches(format!(
                "weights have squared norm {norm_sqr}"
            )));
        }
        Ok(Self {
            num_alive,
            num_dead,
            weights,
        })
    }

    /// Equal-weight superposition over all branches.
    pub fn uniform(num_alive: usize, num_dead: usize) -> Result<Self> {
        let n = num_alive + num_dead;
        let w = Complex64::new((n as f64).recip().sqrt(), 0.0);
        Self::new(num_alive, num_dead, vec![w; n])
    }

    /// `(|alive> + |dead>)/sqrt 2`.
    pub fn canonical() -> Self {
        let w = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self {
            num_alive: 1,
            num_dead: 1,
            weights: vec![w, w],
        }
    }

    pub fn two_branch(c0: Complex64, c1: Complex64) -> Result<Self> {
        Self::new(1, 1, vec![c0, c1])
    }

    /// Two branches with real amplitudes `sqrt(p0)`, `sqrt(1 - p0)`.
    pub fn from_alive_probability(p0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(Error::InvalidBranches(format!("probability {p0}")));
        }
        Self::two_branch(
            Complex64::new(p0.sqrt(), 0.0),
            Complex64::new((1.0 - p0).sqrt(), 0.0),
        )
    }

    pub fn num_alive(&self) -> usize {
        self.num_alive
    }

    pub fn num_dead(&self) -> usize {
        self.num_dead
    }

    pub fn num_branches(&self) -> usize {
        self.num_alive + self.num_dead
    }

    pub fn weights(&self) -> &[Complex64] {
        &self.weights
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.weights.iter().map(Complex64::norm_sqr).collect()
    }

    pub fn cat_width(&self) -> usize {
        let n = self.num_branches();
        (usize::BITS - (n - 1).leading_zeros()).max(1) as usize
    }

    /// Branch stored on record value `value`, if any.
    pub fn label(&self, value: usize) -> Option<BranchLabel> {
        if value < self.num_alive {
            Some(BranchLabel {
                family: Family::Alive,
                index: value,
            })
        } else if value < self.num_branches() {
            Some(BranchLabel {
                family: Family::Dead,
                index: value - self.num_alive,
            })
        } else {
            None
        }
    }

    pub fn value(&self, label: BranchLabel) -> usize {
        match label.family {
            Family::Alive => label.index,
            Family::Dead => self.num_alive + label.index,
        }
    }

    pub fn labels(&self) -> Vec<BranchLabel> {
        (0..self.num_branches()).filter_map(|v| self.label(v)).collect()
    }

    /// Record values whose branch takes part in the clinic visit.
    pub fn participating_values(&self, participation: Participation) -> Vec<usize> {
        (0..self.num_branches())
            .filter(|&v| self.label(v).is_some_and(|l| participation.includes(l.family)))
            .collect()
    }
}

/// Full configuration of one steering experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub branches: BranchStructure,
    /// Environment records; each is as wide as the cat register.
    pub env_qubits: usize,
    pub encoding: RecordEncoding,
    pub observe_variant: ObserveVariant,
    pub participation: Participation,
    pub nonlinear_lambda: Option<f64>,
    pub rng_seed: u64,
}

impl Default for Scenario {
    fn default() -> Self {
        Self::canonical()
    }
}

impl Scenario {
    /// Symmetric two-branch cat, one environment record, plain records,
    /// everyone visits the clinic.
    pub fn canonical() -> Self {
        Self {
            branches: BranchStructure::canonical(),
            env_qubits: 1,
            encoding: RecordEncoding::Plain,
            observe_variant: ObserveVariant::A,
            participation: Participation::All,
            nonlinear_lambda: None,
            rng_seed: 0,
        }
    }

    pub fn with_branches(mut self, branches: BranchStructure) -> Self {
        self.branches = branches;
        self
    }

    pub fn with_encoding(mut self, encoding: RecordEncoding) -> Self {
        self.encoding = encoding;
        self
    }

    pub fn with_participation(mut self, participation: Participation) -> Self {
        self.participation = participation;
        self
    }

    pub fn with_lambda(mut self, lambda: Option<f64>) -> Self {
        self.nonlinear_lambda = lambda;
        self
    }

    pub fn with_env_qubits(mut self, env_qubits: usize) -> Self {
        self.env_qubits = env_qubits;
        self
    }

    pub fn with_variant(mut self, variant: ObserveVariant) -> Self {
        self.observe_variant = variant;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn total_qubits(&self) -> usize {
        protocol_qubits(self.branches.cat_width(), self.encoding, self.env_qubits)
    }

    pub fn validate(&self) -> Result<()> {
        if self.env_qubits == 0 {
            return Err(Error::InvalidScenario {
                field: "env_qubits",
                reason: "at least one environment record is required".into(),
            });
        }
        let total = self.total_qubits();
        if total > MAX_QUBITS {
            return Err(Error::QubitBudget {
                requested: total,
                cap: MAX_QUBITS,
            });
        }
        if let Some(lambda) = self.nonlinear_lambda {
            if !lambda.is_finite() || lambda < 0.0 {
                return Err(Error::InvalidScenario {
                    field: "nonlinear_lambda",
                    reason: format!("must be finite and >= 0, got {lambda}"),
                });
            }
            if self.branches.cat_width() != 1 {
                return Err(Error::InvalidScenario {
                    field: "nonlinear_lambda",
                    reason: "the filter acts on a single record qubit (two-branch cats only)"
                        .into(),
                });
            }
            if self.participation != Participation::All {
                return Err(Error::InvalidScenario {
                    field: "nonlinear_lambda",
                    reason: "the filter is only combined with participation = all".into(),
                });
            }
        }
        Ok(())
    }

    pub fn layout(&self) -> Result<RegisterLayout> {
        protocol_layout(self.branches.cat_width(), self.encoding, self.env_qubits)
    }
}

fn protocol_qubits(cat_width: usize, encoding: RecordEncoding, env_records: usize) -> usize {
    let flags = if encoding.is_tagged() { 2 } else { 0 };
    cat_width * (3 + env_records) + flags + 1
}

/// Register layout `C, [BF], B, E1..En, [AF], A, F`.
///
/// `C`, `B`, `A` and every `Ei` are `cat_width` qubits; `BF`/`AF` are the
/// tagged-encoding flags and `F` is the clinic on/off flag.
pub fn protocol_layout(
    cat_width: usize,
    encoding: RecordEncoding,
    env_records: usize,
) -> Result<RegisterLayout> {
    let total = protocol_qubits(cat_width, encoding, env_records);
    if total > MAX_QUBITS {
        return Err(Error::QubitBudget {
            requested: total,
            cap: MAX_QUBITS,
        });
    }
    let mut sizes: Vec<(String, usize)> = vec![(names::CAT.into(), cat_width)];
    if encoding.is_tagged() {
        sizes.push((names::BRAIN_FLAG.into(), 1));
    }
    sizes.push((names::BRAIN.into(), cat_width));
    sizes.extend((0..env_records).map(|i| (names::env(i), cat_width)));
    if encoding.is_tagged() {
        sizes.push((names::ANCILLA_FLAG.into(), 1));
    }
    sizes.push((names::ANCILLA.into(), cat_width));
    sizes.push((names::CLINIC_FLAG.into(), 1));
    RegisterLayout::new(&sizes)
}

/// Environment record subsystems `E1, E2, ...` present in `layout`.
pub fn env_records(layout: &RegisterLayout) -> Vec<String> {
    (0..)
        .map(names::env)
        .take_while(|n| layout.contains(n))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cat_width() {
        assert_eq!(BranchStructure::canonical().cat_width(), 1);
        assert_eq!(BranchStructure::uniform(2, 2).unwrap().cat_width(), 2);
        assert_eq!(BranchStructure::uniform(2, 3).unwrap().cat_width(), 3);
    }

    #[test]
    fn labels_alive_first() {
        let b = BranchStructure::uniform(2, 2).unwrap();
        assert_eq!(b.label(1).unwrap().family, Family::Alive);
        assert_eq!(b.label(2).unwrap(), BranchLabel { family: Family::Dead, index: 0 });
        assert_eq!(b.label(4), None);
        assert_eq!(b.participating_values(Participation::DeadOnly), vec![2, 3]);
        assert_eq!(b.value(b.label(3).unwrap()), 3);
    }

    #[test]
    fn branch_validation() {
        assert!(BranchStructure::new(0, 1, vec![Complex64::new(1.0, 0.0)]).is_err());
        let w = Complex64::new(0.5, 0.0);
        assert!(BranchStructure::new(1, 1, vec![w, w]).is_err());
        assert!(BranchStructure::from_alive_probability(0.36).is_ok());
    }

    #[test]
    fn layouts() {
        let l = Scenario::canonical().layout().unwrap();
        let names: Vec<_> = l.subsystems().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["C", "B", "E1", "A", "F"]);
        let t = Scenario::canonical()
            .with_encoding(RecordEncoding::Tagged)
            .with_env_qubits(3)
            .layout()
            .unwrap();
        let names: Vec<_> = t.subsystems().iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, ["C", "BF", "B", "E1", "E2", "E3", "AF", "A", "F"]);
        assert_eq!(env_records(&t), ["E1", "E2", "E3"]);
    }

    #[test]
    fn scenario_validation() {
        let s = Scenario::canonical().with_env_qubits(0);
        assert!(matches!(s.validate(), Err(Error::InvalidScenario { field: "env_qubits", .. })));
        let s = Scenario::canonical().with_lambda(Some(-1.0));
        assert!(matches!(
            s.validate(),
            Err(Error::InvalidScenario { field: "nonlinear_lambda", .. })
        ));
        let s = Scenario::canonical().with_env_qubits(30);
        assert!(matches!(s.validate(), Err(Error::QubitBudget { .. })));
    }
}
