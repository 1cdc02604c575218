use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bits::mask;
use crate::error::{Error, Result};

pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// A square matrix checked to satisfy `U^dag U = I` (max entry error 1e-10).
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary(DMatrix<Complex64>);

impl Unitary {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = matrix.shape();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, got: c });
        }
        if !r.is_power_of_two() || r < 2 {
            return Err(Error::NotPowerOfTwo(r));
        }
        let deviation = unitarity_deviation(&matrix);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(Self(matrix))
    }

    pub fn pauli_x() -> Self {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        Self(DMatrix::from_row_slice(2, 2, &[o, l, l, o]))
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self(DMatrix::from_row_slice(2, 2, &[h, h, h, -h]))
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn num_qubits(&self) -> usize {
        self.0.nrows().trailing_zeros() as usize
    }
}

pub fn unitarity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let prod = m.adjoint() * m;
    let n = prod.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Control qubit with the basis value that enables the gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self { qubit, on: true }
    }

    pub fn off(qubit: usize) -> Self {
        Self { qubit, on: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    Controlled {
        controls: Vec<Control>,
        targets: Vec<usize>,
        matrix: Unitary,
    },
    Unitary { targets: Vec<usize>, matrix: Unitary },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    /// Multi-controlled NOT.
    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Gate::Controlled {
            controls,
            targets: vec![target],
            matrix: Unitary::pauli_x(),
        }
    }

    pub fn unitary(targets: Vec<usize>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let matrix = Unitary::new(matrix)?;
        check_arity(&targets, &matrix)?;
        Ok(Gate::Unitary { targets, matrix })
    }

    pub fn controlled(
        controls: Vec<Control>,
        targets: Vec<usize>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        let matrix = Unitary::new(matrix)?;
        check_arity(&targets, &matrix)?;
        Ok(Gate::Controlled {
            controls,
            targets,
            matrix,
        })
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::X(q) | Gate::H(q) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Controlled {
                controls, targets, ..
            } => controls
                .iter()
                .map(|c| c.qubit)
                .chain(targets.iter().copied())
                .collect(),
            Gate::Unitary { targets, .. } => targets.clone(),
        }
    }

    pub(crate) fn validate(&self, num_qubits: usize) -> Result<()> {
        let qubits = self.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            if qubits[..i].contains(&q) {
                return Err(Error::RepeatedQubit(q));
            }
        }
        if let Gate::Controlled { targets, matrix, .. } | Gate::Unitary { targets, matrix } = self
        {
            check_arity(targets, matrix)?;
        }
        Ok(())
    }

    /// Applies the gate in place. Caller has validated it.
    pub(crate) fn apply_in_place(&self, amps: &mut [Complex64], num_qubits: usize) {
        match self {
            Gate::X(q) => apply_x(amps, num_qubits, *q, &[]),
            Gate::Cnot { control, target } => {
                apply_x(amps, num_qubits, *target, &[Control::on(*control)])
            }
            Gate::Swap(a, b) => apply_swap(amps, num_qubits, *a, *b),
            Gate::H(q) => apply_operator(
                amps,
                num_qubits,
                &[*q],
                &[],
                Unitary::hadamard().matrix(),
            ),
            Gate::Controlled {
                controls,
                targets,
                matrix,
            } => {
                if matrix == &Unitary::pauli_x() {
                    apply_x(amps, num_qubits, targets[0], controls)
                } else {
                    apply_operator(amps, num_qubits, targets, controls, matrix.matrix())
                }
            }
            Gate::Unitary { targets, matrix } => {
                apply_operator(amps, num_qubits, targets, &[], matrix.matrix())
            }
        }
    }
}

fn check_arity(targets: &[usize], matrix: &Unitary) -> Result<()> {
    if targets.len() != matrix.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << targets.len(),
            got: matrix.matrix().nrows(),
        });
    }
    Ok(())
}

#[inline]
fn controls_hold(index: usize, controls: &[Control], num_qubits: usize) -> bool {
    controls
        .iter()
        .all(|c| (index & mask(c.qubit, num_qubits) != 0) == c.on)
}

fn apply_x(amps: &mut [Complex64], num_qubits: usize, target: usize, controls: &[Control]) {
    let t = mask(target, num_qubits);
    for i in 0..amps.len() {
        if i & t == 0 && controls_hold(i, controls, num_qubits) {
            amps.swap(i, i | t);
        }
    }
}

fn apply_swap(amps: &mut [Complex64], num_qubits: usize, a: usize, b: usize) {
    let (ma, mb) = (mask(a, num_qubits), mask(b, num_qubits));
    for i in 0..amps.len() {
        if i & ma != 0 && i & mb == 0 {
            amps.swap(i, (i & !ma) | mb);
        }
    }
}

/// Applies an arbitrary `2^k x 2^k` operator (not necessarily unitary) to
/// `targets`, optionally conditioned on `controls`. `targets[0]` is the most
/// significant bit of the operator's index.
pub(crate) fn apply_operator(
    amps: &mut [Complex64],
    num_qubits: usize,
    targets: &[usize],
    controls: &[Control],
    op: &DMatrix<Complex64>,
) {
    let k = targets.len();
    let sub = 1usize << k;
    let target_mask = targets.iter().fold(0, |m, &q| m | mask(q, num_qubits));
    let offsets: Vec<usize> = (0..sub)
        .map(|s| crate::bits::deposit(s, targets, num_qubits))
        .collect();
    let mut gathered = vec![Complex64::new(0.0, 0.0); sub];
    for base in 0..amps.len() {
        if base & target_mask != 0 || !controls_hold(base, controls, num_qubits) {
            continue;
        }
        for (g, &off) in gathered.iter_mut().zip(&offsets) {
            *g = amps[base | off];
        }
        for (row, &off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, g) in gathered.iter().enumerate() {
                acc += op[(row, col)] * g;
            }
            amps[base | off] = acc;
        }
    }
}
