//! Probability-altering filters and antilinear maps.
//!
//! The filter `K = |0><0| + lambda |1><1|` is applied to one qubit and the
//! global state renormalized afterwards. The renormalization is what makes
//! the map nonlinear; `lambda = 1` is the identity.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::{
    DensityMatrix, Gate, RegisterLayout, StateVector, NORM_TOLERANCE,
};

#[derive(Clone, Debug, PartialEq)]
pub struct NonlinearFilter {
    lambda: f64,
    target: String,
}

impl NonlinearFilter {
    pub fn new(lambda: f64, target: impl Into<String>) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::InvalidLambda(lambda));
        }
        Ok(Self {
            lambda,
            target: target.into(),
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn is_identity(&self) -> bool {
        self.lambda == 1.0
    }

    pub fn operator(&self) -> DMatrix<Complex64> {
        let mut k = DMatrix::identity(2, 2);
        k[(1, 1)] = Complex64::new(self.lambda, 0.0);
        k
    }

    fn target_qubit(&self, layout: &RegisterLayout) -> Result<usize> {
        let qubits = layout.qubits(&self.target)?;
        match qubits {
            [q] => Ok(*q),
            _ => Err(Error::FilterTargetWidth {
                name: self.target.clone(),
                width: qubits.len(),
            }),
        }
    }
}

/// `(I ⊗ K) |psi>` renormalized.
pub fn apply_nonlinear_filter(
    state: &StateVector,
    layout: &RegisterLayout,
    filter: &NonlinearFilter,
) -> Result<StateVector> {
    if state.num_qubits() != layout.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_qubits(),
            got: state.num_qubits(),
        });
    }
    let q = filter.target_qubit(layout)?;
    if filter.is_identity() {
        return Ok(state.clone());
    }
    let raw = state.apply_raw_operator(&[q], &filter.operator());
    StateVector::normalized(raw).map_err(|_| Error::DegenerateFilter)
}

/// Density-matrix form of the filter: `K rho K^dag / Tr(K rho K^dag)`.
///
/// Only pure global states are accepted; for a proper or improper mixture the
/// nonlinear map is not defined here.
pub fn apply_nonlinear_filter_to_density(
    rho: &DensityMatrix,
    layout: &RegisterLayout,
    filter: &NonlinearFilter,
) -> Result<DensityMatrix> {
    let purity = rho.purity();
    if (purity - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::MixedStateFilter { purity });
    }
    if rho.num_qubits() != layout.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_qubits(),
            got: rho.num_qubits(),
        });
    }
    let q = filter.target_qubit(layout)?;
    let out = rho.sandwich(&[q], &filter.operator());
    let tr = out.trace().re;
    if tr <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateFilter);
    }
    Ok(DensityMatrix::from_entries_unchecked(out / Complex64::new(tr, 0.0)))
}

/// Closed-form outcome probabilities after filtering
/// `c0|0..0> + c1|1..1>`: `P0 = |c0|^2 / (|c0|^2 + lambda^2 |c1|^2)`.
pub fn nonlinear_probabilities(c0: Complex64, c1: Complex64, lambda: f64) -> Result<(f64, f64)> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::InvalidLambda(lambda));
    }
    let norm_sqr = c0.norm_sqr() + c1.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr });
    }
    let w0 = c0.norm_sqr();
    let w1 = lambda * lambda * c1.norm_sqr();
    let denom = w0 + w1;
    if denom <= 0.0 {
        return Err(Error::DegenerateFilter);
    }
    Ok((w0 / denom, w1 / denom))
}

/// Complex conjugation of every amplitude followed by an optional unitary.
pub fn apply_antilinear(state: &StateVector, post: Option<&Gate>) -> Result<StateVector> {
    let conj = state.conjugate();
    match post {
        Some(gate) => conj.apply_gate(gate),
        None => Ok(conj),
    }
}
