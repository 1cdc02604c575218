use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::{
    random::ginibre, rng_from_seed, DensityMatrix, QuantumState, RegisterLayout, Unitary,
};

/// Completeness tolerance on `||sum K^dag K - I||_F`.
pub const CPTP_TOLERANCE: f64 = 1e-10;

/// Kraus representation of a channel on `arity` qubits.
///
/// Construction only checks shapes; use [`KrausChannel::validate_cptp`] for
/// the completeness relation. [`apply_local_channel`] refuses invalid channels.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<DMatrix<Complex64>>,
    arity: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CptpCheck {
    pub valid: bool,
    pub residual: f64,
}

impl KrausChannel {
    pub fn new(operators: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let first = operators.first().ok_or(Error::KrausShape)?;
        let dim = first.nrows();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if operators.iter().any(|k| k.shape() != (dim, dim)) {
            return Err(Error::KrausShape);
        }
        Ok(Self {
            operators,
            arity: dim.trailing_zeros() as usize,
        })
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1 << arity;
        Self {
            operators: vec![DMatrix::identity(dim, dim)],
            arity,
        }
    }

    pub fn from_unitary(u: &Unitary) -> Self {
        Self {
            operators: vec![u.matrix().clone()],
            arity: u.num_qubits(),
        }
    }

    /// Complete dephasing: `{|0><0|, |1><1|}`.
    pub fn dephasing() -> Self {
        Self {
            operators: vec![basis_op(0, 0), basis_op(1, 1)],
            arity: 1,
        }
    }

    /// Reset to `|0>`: `{|0><0|, |0><1|}`.
    pub fn reset() -> Self {
        Self {
            operators: vec![basis_op(0, 0), basis_op(0, 1)],
            arity: 1,
        }
    }

    pub fn operators(&self) -> &[DMatrix<Complex64>] {
        &self.operators
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn completeness_residual(&self) -> f64 {
        let dim = 1 << self.arity;
        let sum = self
            .operators
            .iter()
            .fold(DMatrix::<Complex64>::zeros(dim, dim), |acc, k| acc + k.adjoint() * k);
        (sum - DMatrix::identity(dim, dim)).norm()
    }

    pub fn validate_cptp(&self) -> CptpCheck {
        let residual = self.completeness_residual();
        CptpCheck {
            valid: residual <= CPTP_TOLERANCE,
            residual,
        }
    }
}

fn basis_op(row: usize, col: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(2, 2);
    m[(row, col)] = Complex64::new(1.0, 0.0);
    m
}

pub fn validate_cptp(channel: &KrausChannel) -> CptpCheck {
    channel.validate_cptp()
}

/// `sum_k (I ⊗ K_k) rho (I ⊗ K_k)^dag` with the channel on `subsystem`.
pub fn apply_local_channel<S: QuantumState + ?Sized>(
    state: &S,
    layout: &RegisterLayout,
    subsystem: &str,
    channel: &KrausChannel,
) -> Result<DensityMatrix> {
    if state.num_qubits() != layout.total_qubits() {
        return Err(Error::DimensionMismatch {
            expected: layout.total_qubits(),
            got: state.num_qubits(),
        });
    }
    let qubits = layout.qubits(subsystem)?;
    if qubits.len() != channel.arity {
        return Err(Error::ArityMismatch {
            subsystem: subsystem.to_owned(),
            channel: channel.arity,
            width: qubits.len(),
        });
    }
    let check = channel.validate_cptp();
    if !check.valid {
        return Err(Error::NotCptp {
            residual: check.residual,
        });
    }
    let rho = state.to_density();
    let dim = rho.dim();
    let out = channel
        .operators
        .iter()
        .fold(DMatrix::<Complex64>::zeros(dim, dim), |acc, k| {
            acc + rho.sandwich(qubits, k)
        });
    Ok(DensityMatrix::from_entries_unchecked(out))
}

/// Seeded random CPTP channel.
///
/// Draws `num_kraus` Ginibre matrices `G_k` and returns
/// `K_k = G_k S^{-1/2}` with `S = sum G_k^dag G_k`, so completeness holds
/// by construction. With one operator the result is the polar unitary of `G`.
pub fn random_channel(arity: usize, num_kraus: usize, rng_seed: u64) -> Result<KrausChannel> {
    if num_kraus == 0 {
        return Err(Error::KrausShape);
    }
    let dim = 1usize << arity;
    let mut rng = rng_from_seed(rng_seed);
    let raw: Vec<_> = (0..num_kraus).map(|_| ginibre(dim, dim, &mut rng)).collect();
    let s = raw
        .iter()
        .fold(DMatrix::<Complex64>::zeros(dim, dim), |acc, g| acc + g.adjoint() * g);
    let inv_sqrt = inverse_sqrt_psd(&s)?;
    KrausChannel::new(raw.into_iter().map(|g| g * &inv_sqrt).collect())
}

fn inverse_sqrt_psd(s: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let h = (s + s.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 1e-14) {
        return Err(Error::CrossCheck("singular Kraus normalization".into()));
    }
    let d = nalgebra::DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex64::new(l.sqrt().recip(), 0.0)),
    );
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&d) * v.adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::{init_register, partial_trace, unitarity_deviation, Gate};

    fn bell() -> (RegisterLayout, crate::statevec::StateVector) {
        let l = RegisterLayout::new(&[("C", 1), ("B", 1)]).unwrap();
        let s = init_register(&l, "00")
            .unwrap()
            .apply_gates(&[Gate::H(0), Gate::cnot(0, 1)])
            .unwrap();
        (l, s)
    }

    #[test]
    fn validate_examples() {
        let id = KrausChannel::identity(1).validate_cptp();
        assert!(id.valid && id.residual == 0.0);
        assert!(KrausChannel::dephasing().validate_cptp().valid);
        let mut k = DMatrix::<Complex64>::identity(2, 2);
        k[(1, 1)] = Complex64::new(2.0, 0.0);
        let bad = KrausChannel::new(vec![k]).unwrap().validate_cptp();
        assert!(!bad.valid);
        assert!((bad.residual - 3.0).abs() < 1e-12);
    }

    #[test]
    fn shape_errors() {
        assert_eq!(KrausChannel::new(vec![]), Err(Error::KrausShape));
        let a = DMatrix::<Complex64>::identity(2, 2);
        let b = DMatrix::<Complex64>::identity(4, 4);
        assert_eq!(KrausChannel::new(vec![a, b]), Err(Error::KrausShape));
    }

    #[test]
    fn identity_channel_leaves_state() {
        let (l, s) = bell();
        let out = apply_local_channel(&s, &l, "B", &KrausChannel::identity(1)).unwrap();
        assert!(out.max_abs_diff(&s.to_density()) < 1e-15);
    }

    #[test]
    fn dephasing_and_reset_on_bell_pair() {
        let (l, s) = bell();
        let half = DensityMatrix::from_diagonal(&[0.5, 0.5]).unwrap();

        let deph = apply_local_channel(&s, &l, "B", &KrausChannel::dephasing()).unwrap();
        // brute force: 4x4 diag(1/2, 0, 0, 1/2), no coherences
        let expected = DensityMatrix::from_diagonal(&[0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(deph.max_abs_diff(&expected) < 1e-15);
        let rho_c = partial_trace(&deph, &l, &["C"]).unwrap();
        assert!(rho_c.trace_distance(&half).unwrap() < 1e-12);

        let reset = apply_local_channel(&s, &l, "B", &KrausChannel::reset()).unwrap();
        let expected = DensityMatrix::from_diagonal(&[0.5, 0.0, 0.5, 0.0]).unwrap();
        assert!(reset.max_abs_diff(&expected) < 1e-15);
        let rho_c = partial_trace(&reset, &l, &["C"]).unwrap();
        assert!(rho_c.trace_distance(&half).unwrap() < 1e-12);
    }

    #[test]
    fn rejects_invalid_or_mismatched() {
        let (l, s) = bell();
        let mut k = DMatrix::<Complex64>::identity(2, 2);
        k[(1, 1)] = Complex64::new(2.0, 0.0);
        let bad = KrausChannel::new(vec![k]).unwrap();
        assert!(matches!(
            apply_local_channel(&s, &l, "B", &bad),
            Err(Error::NotCptp { .. })
        ));
        assert!(matches!(
            apply_local_channel(&s, &l, "B", &KrausChannel::identity(2)),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            apply_local_channel(&s, &l, "Q", &KrausChannel::identity(1)),
            Err(Error::UnknownSubsystem(_))
        ));
    }

    #[test]
    fn random_channels() {
        let a = random_channel(2, 3, 9).unwrap();
        assert_eq!(a, random_channel(2, 3, 9).unwrap());
        assert!(a.validate_cptp().residual < 1e-12);
        for seed in 0..10 {
            let u = random_channel(1, 1, seed).unwrap();
            assert!(unitarity_deviation(&u.operators()[0]) < 1e-10);
        }
        assert!(random_channel(1, 0, 0).is_err());
    }
}
