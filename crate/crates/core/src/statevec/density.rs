use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::RegisterLayout;
use super::state::QuantumState;
use crate::bits::{complement, deposit};
use crate::error::{Error, Result};

/// Tolerance for Hermiticity, unit trace and positivity.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Eigenvalues in `[-EIGEN_CLIP, 0)` are treated as exact zeros.
pub const EIGEN_CLIP: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<Complex64>,
    num_qubits: usize,
}

impl DensityMatrix {
    /// Validated constructor: Hermitian, unit trace, PSD (all within 1e-10).
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        if !r.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(r));
        }
        let herm = (&entries - entries.adjoint()).camax();
        if herm > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let rho = Self::from_entries_unchecked(entries);
        let tr = rho.trace().re;
        if (tr - 1.0).abs() > DENSITY_TOLERANCE {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr}")));
        }
        if let Some(min) = rho.eigenvalues().first() {
            if *min < -DENSITY_TOLERANCE {
                return Err(Error::InvalidDensityMatrix(format!(
                    "negative eigenvalue {min:e}"
                )));
            }
        }
        Ok(rho)
    }

    pub(crate) fn from_entries_unchecked(entries: DMatrix<Complex64>) -> Self {
        let num_qubits = entries.nrows().trailing_zeros() as usize;
        Self {
            entries,
            num_qubits,
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let d = nalgebra::DVector::from_iterator(
            diag.len(),
            diag.iter().map(|&p| Complex64::new(p, 0.0)),
        );
        Self::new(DMatrix::from_diagonal(&d))
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        Self::from_entries_unchecked(
            DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0),
        )
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).collect()
    }

    /// Ascending eigenvalues of the Hermitian part.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.entries)
    }

    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.entries.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn von_neumann_entropy(&self) -> f64 {
        entropy_bits(&self.eigenvalues())
    }

    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        let diff = &self.entries - &other.entries;
        let d = 0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>();
        Ok(d.clamp(0.0, 1.0))
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        (&self.entries - &other.entries).camax()
    }

    /// `op · rho · op^dag` with `op` acting on `qubits` (identity elsewhere).
    pub(crate) fn sandwich(&self, qubits: &[usize], op: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = self.num_qubits;
        let mut left = self.entries.clone();
        apply_to_columns(&mut left, n, qubits, op);
        let mut right = left.adjoint();
        apply_to_columns(&mut right, n, qubits, op);
        right.adjoint()
    }
}

fn apply_to_columns(m: &mut DMatrix<Complex64>, n: usize, qubits: &[usize], op: &DMatrix<Complex64>) {
    let dim = m.nrows();
    for column in m.as_mut_slice().chunks_mut(dim) {
        super::gate::apply_operator(column, n, qubits, &[], op);
    }
}

impl QuantumState for DensityMatrix {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn reduced(&self, kept: &[usize]) -> DensityMatrix {
        let n = self.num_qubits;
        let rest = complement(kept, n);
        let dk = 1usize << kept.len();
        let de = 1usize << rest.len();
        let kept_off: Vec<usize> = (0..dk).map(|i| deposit(i, kept, n)).collect();
        let rest_off: Vec<usize> = (0..de).map(|e| deposit(e, &rest, n)).collect();
        let out = DMatrix::from_fn(dk, dk, |i, j| {
            rest_off
                .iter()
                .map(|&e| self.entries[(kept_off[i] | e, kept_off[j] | e)])
                .sum()
        });
        DensityMatrix::from_entries_unchecked(out)
    }

    fn to_density(&self) -> DensityMatrix {
        self.clone()
    }
}

impl DensityMatrix {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn partial_trace(&self, layout: &RegisterLayout, keep: &[&str]) -> Result<DensityMatrix> {
        super::state::partial_trace(self, layout, keep)
    }
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.von_neumann_entropy()
}

pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    a.trace_distance(b)
}

/// Eigenvalues (ascending) of the Hermitian part of `m`.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut eig: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// `-sum l log2 l` with `0 log 0 = 0` and clipping of tiny negatives.
pub(crate) fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    let s: f64 = eigenvalues
        .iter()
        .map(|&l| if (-EIGEN_CLIP..0.0).contains(&l) { 0.0 } else { l })
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum();
    s.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{init_register, partial_trace, Gate, RegisterLayout, StateVector};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn purity_and_entropy_of_simple_states() {
        let pure = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        assert!((pure.purity() - 1.0).abs() < 1e-15);
        assert!(pure.von_neumann_entropy().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(1);
        assert!((mixed.purity() - 0.5).abs() < 1e-15);
        assert!((mixed.von_neumann_entropy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn trace_distance_examples() {
        let zero = DensityMatrix::from_diagonal(&[1.0, 0.0]).unwrap();
        let one = DensityMatrix::from_diagonal(&[0.0, 1.0]).unwrap();
        assert!(zero.trace_distance(&zero).unwrap().abs() < 1e-15);
        assert!((zero.trace_distance(&one).unwrap() - 1.0).abs() < 1e-12);
        let half = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();
        let tilted = DensityMatrix::from_diagonal(&[0.2, 0.8]).unwrap();
        assert!((half.trace_distance(&tilted).unwrap() - 0.3).abs() < 1e-12);
        assert!(matches!(
            half.trace_distance(&DensityMatrix::maximally_mixed(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn validated_constructor() {
        let bad_trace = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(1.0)]));
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(DensityMatrix::new(negative).is_err());
        let non_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.3), c(0.0), c(0.5)]);
        assert!(DensityMatrix::new(non_herm).is_err());
    }

    #[test]
    fn product_state_keeps_pure_factor() {
        let l = RegisterLayout::new(&[("A", 1), ("B", 1)]).unwrap();
        let s = init_register(&l, "00").unwrap().apply_gate(&Gate::H(1)).unwrap();
        let rho = partial_trace(&s, &l, &["B"]).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        let h = 0.5;
        assert!(rho.entries().iter().all(|z| (z.re - h).abs() < 1e-12 && z.im.abs() < 1e-15));
    }

    #[test]
    fn density_and_pure_partial_traces_agree() {
        let l = RegisterLayout::new(&[("C", 1), ("B", 1), ("E", 1)]).unwrap();
        let s = StateVector::normalized(vec![
            c(0.3), c(0.1), c(-0.2), c(0.5), c(0.0), Complex64::new(0.1, 0.4), c(0.2), c(0.6),
        ])
        .unwrap();
        let rho = s.to_density();
        for keep in [&["C"][..], &["E", "C"][..], &["B"][..]] {
            let a = partial_trace(&s, &l, keep).unwrap();
            let b = partial_trace(&rho, &l, keep).unwrap();
            assert!(a.max_abs_diff(&b) < 1e-14);
        }
    }
}
