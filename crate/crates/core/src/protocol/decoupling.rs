//! Partial-access recovery diagnostic.
//!
//! One which-outcome bit is spread over `m` record qubits by a Haar-random
//! isometry. The first `k` qubits are accessible; the remaining `m - k` are
//! not. If the inaccessible part carries essentially no information about the
//! bit, coherence can in principle be restored from the accessible part alone.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{try_map_indices, Execution};
use crate::statevec::random::haar_isometry;
use crate::statevec::{entropy_bits, hermitian_eigenvalues, rng_from_seed, trial_seed};

pub const MAX_RECORD_QUBITS: usize = 12;

/// Recovery is deemed feasible when the inaccessible qubits hold less than
/// this many bits of which-outcome information.
pub const LEAK_THRESHOLD_BITS: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecouplingReport {
    pub record_qubits: usize,
    pub accessible: usize,
    /// Holevo quantity of the inaccessible qubits for a uniform bit.
    pub leaked_info_bits: f64,
    /// Trace distance between the inaccessible reduced states for 0 and 1.
    pub conditional_trace_distance: f64,
    pub recoverable: bool,
}

/// Reduced state on the trailing `r` qubits of a pure state given as a
/// `2^k x 2^r` amplitude matrix: `M^T conj(M)`.
fn trailing_reduced(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    m.transpose() * m.map(|z| z.conj())
}

pub fn decoupling_diagnostic(m: usize, k: usize, rng_seed: u64) -> Result<DecouplingReport> {
    if m == 0 || m > MAX_RECORD_QUBITS || k > m {
        return Err(Error::AccessibleOutOfRange {
            accessible: k,
            record_qubits: m,
            max: MAX_RECORD_QUBITS,
        });
    }
    let r = m - k;
    let (rows, cols) = (1usize << k, 1usize << r);
    let code = haar_isometry(1 << m, 2, &mut rng_from_seed(rng_seed));
    // row-major reshape: accessible qubits are the high bits
    let shaped = |b: usize| DMatrix::from_fn(rows, cols, |a, e| code[(a * cols + e, b)]);
    let (m0, m1) = (shaped(0), shaped(1));

    let (mut rho0, mut rho1) = (trailing_reduced(&m0), trailing_reduced(&m1));
    if cols > 2 * rows {
        // both states live in the span of the rows of M0 and M1
        let mut span = DMatrix::zeros(cols, 2 * rows);
        span.columns_mut(0, rows).copy_from(&m0.transpose());
        span.columns_mut(rows, rows).copy_from(&m1.transpose());
        let q = span.qr().q();
        let qa = q.adjoint();
        rho0 = &qa * rho0 * &q;
        rho1 = &qa * rho1 * &q;
    }

    let half = Complex64::new(0.5, 0.0);
    let mix = (&rho0 + &rho1) * half;
    let leak = entropy_bits(&hermitian_eigenvalues(&mix))
        - 0.5 * entropy_bits(&hermitian_eigenvalues(&rho0))
        - 0.5 * entropy_bits(&hermitian_eigenvalues(&rho1));
    let distance = 0.5
        * hermitian_eigenvalues(&(&rho0 - &rho1))
            .iter()
            .map(|l| l.abs())
            .sum::<f64>();
    let leak = leak.clamp(0.0, 1.0);
    Ok(DecouplingReport {
        record_qubits: m,
        accessible: k,
        leaked_info_bits: leak,
        conditional_trace_distance: distance.clamp(0.0, 1.0),
        recoverable: leak < LEAK_THRESHOLD_BITS,
    })
}

/// Aggregate over random encodings at one accessible size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecouplingSweepRow {
    pub record_qubits: usize,
    pub accessible: usize,
    pub encodings: usize,
    pub mean_leaked_info_bits: f64,
    pub mean_conditional_trace_distance: f64,
    pub feasible_fraction: f64,
}

/// Every `k` in `0..=m`, each over `encodings` Haar encodings. Encoding `j`
/// uses seed `trial_seed(rng_seed, j)` for every `k`, so rows share draws.
pub fn decoupling_sweep(
    m: usize,
    encodings: usize,
    rng_seed: u64,
    exec: Execution,
) -> Result<Vec<DecouplingSweepRow>> {
    if encodings == 0 {
        return Err(Error::Precondition("at least one encoding is required".into()));
    }
    let per_k = encodings as u64;
    let all = try_map_indices((m as u64 + 1) * per_k, exec, |i| {
        decoupling_diagnostic(m, (i / per_k) as usize, trial_seed(rng_seed, i % per_k))
    })?;
    Ok(all
        .chunks(encodings)
        .enumerate()
        .map(|(k, reports)| {
            let n = reports.len() as f64;
            DecouplingSweepRow {
                record_qubits: m,
                accessible: k,
                encodings,
                mean_leaked_info_bits: reports.iter().map(|r| r.leaked_info_bits).sum::<f64>() / n,
                mean_conditional_trace_distance: reports
                    .iter()
                    .map(|r| r.conditional_trace_distance)
                    .sum::<f64>()
                    / n,
                feasible_fraction: reports.iter().filter(|r| r.recoverable).count() as f64 / n,
            }
        })
        .collect())
}

/// Accessible size at which the feasible fraction first reaches one half,
/// linearly interpolated between neighbouring rows.
pub fn feasibility_crossing(rows: &[DecouplingSweepRow]) -> Option<f64> {
    rows.windows(2).find_map(|w| {
        let (a, b) = (&w[0], &w[1]);
        if a.feasible_fraction < 0.5 && b.feasible_fraction >= 0.5 {
            let t = (0.5 - a.feasible_fraction) / (b.feasible_fraction - a.feasible_fraction);
            Some(a.accessible as f64 + t * (b.accessible - a.accessible) as f64)
        } else {
            None
        }
    })
}
