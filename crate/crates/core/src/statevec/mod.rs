//! Dense pure-state and density-matrix core.
//!
//! Registers are qubit-only and amplitudes are big-endian: qubit 0 is the most
//! significant bit of a basis index. Values are immutable; every operation
//! returns a new state.

mod density;
mod gate;
mod layout;
pub mod random;
mod sampling;
mod state;

pub use density::{
    purity, trace_distance, von_neumann_entropy, DensityMatrix, DENSITY_TOLERANCE, EIGEN_CLIP,
};
pub(crate) use density::{entropy_bits, hermitian_eigenvalues};
pub use gate::{unitarity_deviation, Control, Gate, Unitary, UNITARY_TOLERANCE};
pub use layout::{RegisterLayout, Subsystem, MAX_QUBITS};
pub use sampling::{
    project, rng_from_seed, sample_index, sample_outcome, sample_outcome_with, splitmix64,
    trial_seed, uniform, SimRng,
};
pub use state::{
    born_probabilities, init_register, partial_trace, ProbabilityTable, QuantumState, StateVector,
    NORM_TOLERANCE,
};
