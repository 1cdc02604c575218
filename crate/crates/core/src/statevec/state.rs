use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::gate::Gate;
use super::layout::{RegisterLayout, MAX_QUBITS};
use crate::bits::{complement, deposit, extract};
use crate::error::{Error, Result};

/// Tolerance on `sum |a_i|^2 = 1` for every public state.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Normalized pure state of `num_qubits` qubits, big-endian amplitude order.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
    num_qubits: usize,
}

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_raw(amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// Rescales to unit norm; fails on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut state = Self::from_raw(amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if norm_sqr <= f64::MIN_POSITIVE {
            return Err(Error::ZeroProbability);
        }
        let scale = norm_sqr.sqrt().recip();
        state.amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(state)
    }

    fn from_raw(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(len));
        }
        let num_qubits = len.trailing_zeros() as usize;
        if num_qubits > MAX_QUBITS {
            return Err(Error::QubitBudget {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::QubitBudget {
                requested: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidLabel(format!("basis index {index}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            amplitudes,
            num_qubits,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// `self ⊗ other`; `self` occupies the most significant qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(Error::QubitBudget {
                requested: n,
                cap: MAX_QUBITS,
            });
        }
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Ok(StateVector {
            amplitudes,
            num_qubits: n,
        })
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Largest entry-wise amplitude difference; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn conjugate(&self) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.iter().map(Complex64::conj).collect(),
            num_qubits: self.num_qubits,
        }
    }

    pub fn apply_gate(&self, gate: &Gate) -> Result<StateVector> {
        gate.validate(self.num_qubits)?;
        let mut out = self.clone();
        gate.apply_in_place(&mut out.amplitudes, self.num_qubits);
        Ok(out)
    }

    pub fn apply_gates<'a, I>(&self, gates: I) -> Result<StateVector>
    where
        I: IntoIterator<Item = &'a Gate>,
    {
        let mut out = self.clone();
        for gate in gates {
            gate.validate(self.num_qubits)?;
            gate.apply_in_place(&mut out.amplitudes, self.num_qubits);
        }
        Ok(out)
    }

    /// Applies a (possibly non-unitary) operator to `targets` without renormalizing.
    pub(crate) fn apply_raw_operator(
        &self,
        targets: &[usize],
        op: &DMatrix<Complex64>,
    ) -> Vec<Complex64> {
        let mut amps = self.amplitudes.clone();
        super::gate::apply_operator(&mut amps, self.num_qubits, targets, &[], op);
        amps
    }

    /// Probability distribution over the values held on `qubits`.
    pub(crate) fn marginal(&self, qubits: &[usize]) -> Vec<f64> {
        let mut probs = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amplitudes.iter().enumerate() {
            probs[extract(i, qubits, self.num_qubits)] += a.norm_sqr();
        }
        probs
    }

    /// Zeroes every amplitude whose `qubits` do not read `value`, unnormalized.
    pub(crate) fn project_raw(&self, qubits: &[usize], value: usize) -> Vec<Complex64> {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                if extract(i, qubits, self.num_qubits) == value {
                    a
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect()
    }
}

/// Either a pure or a mixed state; lets partial traces and channels accept both.
pub trait QuantumState {
    fn num_qubits(&self) -> usize;

    /// Reduced density matrix on `kept`, ordered as given.
    fn reduced(&self, kept: &[usize]) -> DensityMatrix;

    fn to_density(&self) -> DensityMatrix;
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn reduced(&self, kept: &[usize]) -> DensityMatrix {
        let n = self.num_qubits;
        let rest = complement(kept, n);
        let mut m = DMatrix::<Complex64>::zeros(1 << kept.len(), 1 << rest.len());
        for (i, &a) in self.amplitudes.iter().enumerate() {
            m[(extract(i, kept, n), extract(i, &rest, n))] = a;
        }
        DensityMatrix::from_entries_unchecked(&m * m.adjoint())
    }

    fn to_density(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        DensityMatrix::from_entries_unchecked(&v * v.adjoint())
    }
}

/// Outcome probabilities over a subsystem's computational basis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbabilityTable(Vec<f64>);

impl ProbabilityTable {
    pub fn new(probabilities: Vec<f64>) -> Self {
        Self(probabilities)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, outcome: usize) -> f64 {
        self.0.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Outcomes with probability above `tol`.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > tol).collect()
    }

    pub fn max_abs_diff(&self, other: &ProbabilityTable) -> f64 {
        let len = self.len().max(other.len());
        (0..len)
            .map(|i| (self.get(i) - other.get(i)).abs())
            .fold(0.0, f64::max)
    }
}

/// Computational basis state named by `label`.
///
/// Two label forms are accepted: a bit string covering the whole register
/// (`"0100"`, underscores and spaces ignored), or comma-separated
/// `NAME=bits` assignments (`"C=1,B=00"`) with unnamed subsystems left at 0.
pub fn init_register(layout: &RegisterLayout, label: &str) -> Result<StateVector> {
    let n = layout.total_qubits();
    let mut index = 0usize;
    if label.contains('=') {
        for part in label.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, bits) = part
                .split_once('=')
                .ok_or_else(|| Error::InvalidLabel(label.to_owned()))?;
            let qubits = layout.qubits(name.trim())?;
            let value = parse_bits(bits.trim(), qubits.len(), label)?;
            index |= deposit(value, qubits, n);
        }
    } else {
        let all: Vec<usize> = (0..n).collect();
        index = deposit(parse_bits(label, n, label)?, &all, n);
    }
    StateVector::basis_state(n, index)
}

fn parse_bits(bits: &str, width: usize, label: &str) -> Result<usize> {
    let digits: Vec<char> = bits.chars().filter(|c| *c != '_' && *c != ' ').collect();
    if digits.len() != width {
        return Err(Error::LabelLength {
            label: label.to_owned(),
            expected: width,
            got: digits.len(),
        });
    }
    digits.iter().try_fold(0usize, |acc, ch| match ch {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::InvalidLabel(label.to_owned())),
    })
}

pub fn born_probabilities(
    state: &StateVector,
    layout: &RegisterLayout,
    subsystem: &str,
) -> Result<ProbabilityTable> {
    check_layout(state, layout)?;
    Ok(ProbabilityTable(state.marginal(layout.qubits(subsystem)?)))
}

/// Reduced state over `keep`, ordered as listed (see [`RegisterLayout::restrict`]).
pub fn partial_trace<S: QuantumState + ?Sized>(
    state: &S,
    layout: &RegisterLayout,
    keep: &[&str],
) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::EmptyKeep);
    }
    if state.num_qubits() != layout.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_qubits(),
            got: state.num_qubits(),
        });
    }
    let kept = layout.qubits_of(keep)?;
    Ok(state.reduced(&kept))
}

pub(crate) fn check_layout(state: &StateVector, layout: &RegisterLayout) -> Result<()> {
    if state.num_qubits() != layout.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_qubits(),
            got: state.num_qubits(),
        });
    }
    Ok(())
}
