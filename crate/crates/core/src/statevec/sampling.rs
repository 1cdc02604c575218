//! Seeded Born-rule sampling.
//!
//! All randomness comes from [`SimRng`] (ChaCha8, `rand_chacha`) seeded via
//! `SeedableRng::seed_from_u64`. Uniform variates are built directly from
//! the top 53 bits of `next_u64`, so a seed fixes the sampled trajectory on
//! every platform.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::layout::RegisterLayout;
use super::state::{check_layout, StateVector};
use crate::error::{Error, Result};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw in `[0, 1)` with 53 bits of resolution.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` in an ensemble: the `(index + 1)`-th output of a
/// SplitMix64 stream started at `base`.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    splitmix64(base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Inverse-CDF pick. Zero-probability outcomes are never returned.
pub fn sample_index(probs: &[f64], u: f64) -> Option<usize> {
    let total: f64 = probs.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    let mut last = None;
    for (i, &p) in probs.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        acc += p;
        last = Some(i);
        if target < acc {
            return Some(i);
        }
    }
    last
}

/// Renormalized projection of `subsystem` onto `outcome`.
pub fn project(
    state: &StateVector,
    layout: &RegisterLayout,
    subsystem: &str,
    outcome: usize,
) -> Result<StateVector> {
    check_layout(state, layout)?;
    let qubits = layout.qubits(subsystem)?;
    if outcome >= 1 << qubits.len() {
        return Err(Error::InvalidLabel(format!("outcome {outcome} of `{subsystem}`")));
    }
    StateVector::normalized(state.project_raw(qubits, outcome))
}

pub fn sample_outcome(
    state: &StateVector,
    layout: &RegisterLayout,
    subsystem: &str,
    rng_seed: u64,
) -> Result<(usize, StateVector)> {
    sample_outcome_with(state, layout, subsystem, &mut rng_from_seed(rng_seed))
}

pub fn sample_outcome_with(
    state: &StateVector,
    layout: &RegisterLayout,
    subsystem: &str,
    rng: &mut impl RngCore,
) -> Result<(usize, StateVector)> {
    check_layout(state, layout)?;
    let qubits = layout.qubits(subsystem)?;
    let probs = state.marginal(qubits);
    let outcome = sample_index(&probs, uniform(rng)).ok_or(Error::ZeroProbability)?;
    let post = StateVector::normalized(state.project_raw(qubits, outcome))?;
    Ok((outcome, post))
}
