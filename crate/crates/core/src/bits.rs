//! Index arithmetic for big-endian qubit registers.
//!
//! Qubit 0 is the most significant bit of a basis index: in an `n`-qubit
//! register, qubit `q` owns bit `n - 1 - q`.

#[inline]
pub(crate) fn mask(qubit: usize, num_qubits: usize) -> usize {
    1usize << (num_qubits - 1 - qubit)
}

/// Reads the value stored on `qubits` (first listed is most significant).
#[inline]
pub(crate) fn extract(index: usize, qubits: &[usize], num_qubits: usize) -> usize {
    qubits.iter().fold(0usize, |acc, &q| {
        (acc << 1) | usize::from(index & mask(q, num_qubits) != 0)
    })
}

/// Inverse of [`extract`]: spreads `value` onto `qubits`, other bits zero.
#[inline]
pub(crate) fn deposit(value: usize, qubits: &[usize], num_qubits: usize) -> usize {
    let width = qubits.len();
    qubits.iter().enumerate().fold(0usize, |acc, (j, &q)| {
        if value >> (width - 1 - j) & 1 == 1 {
            acc | mask(q, num_qubits)
        } else {
            acc
        }
    })
}

pub(crate) fn complement(qubits: &[usize], num_qubits: usize) -> Vec<usize> {
    (0..num_qubits).filter(|q| !qubits.contains(q)).collect()
}
