//! Simulation of observation, local memory erasure and re-observation on
//! small qubit registers, with checks for the limits linear quantum
//! mechanics puts on such "branch steering".
//!
//! * [`statevec`]: dense states, gates, partial traces, entropy, sampling.
//! * [`channels`]: Kraus channels, the nonlinear filter, antilinear maps.
//! * [`protocol`]: the cat, observer, environment and clinic circuits,
//!   trial ensembles, and the partial-access decoupling diagnostic.
//! * [`verify`]: checks returning [`verify::Verdict`]s.

mod bits;
pub mod channels;
pub mod error;
pub mod par;
pub mod protocol;
pub mod statevec;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use par::Execution;
