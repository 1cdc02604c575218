//! Local channels in Kraus form, plus the nonlinear filter and antilinear
//! maps used as counterexamples to no-signalling.

mod kraus;
mod nonlinear;

pub use kraus::{
    apply_local_channel, random_channel, validate_cptp, CptpCheck, KrausChannel, CPTP_TOLERANCE,
};
pub use nonlinear::{
    apply_antilinear, apply_nonlinear_filter, apply_nonlinear_filter_to_density,
    nonlinear_probabilities, NonlinearFilter,
};
