//! The branch-steering protocol: cat preparation, observation, environment
//! spreading, clinic erasure, re-observation, and the decoupling diagnostic.

mod decoupling;
mod scenario;
mod steps;
mod trial;

pub use decoupling::{
    decoupling_diagnostic, decoupling_sweep, feasibility_crossing, DecouplingReport,
    DecouplingSweepRow, LEAK_THRESHOLD_BITS,
    MAX_RECORD_QUBITS,
};
pub use scenario::{
    env_records, names, protocol_layout, BranchLabel, BranchStructure, Family, ObserveVariant,
    Participation, RecordEncoding, Scenario,
};
pub use steps::{
    clinic_erase, condition_on_visit, conditional_clinic, initial_state, is_blank, observe,
    prepare_cat, records_consistent, reobserve, reobserve_coupling, spread_to_environment,
};
pub use trial::{
    analytic_post_distribution, run_ensemble, run_trial, EnsembleSummary, PreparedScenario,
    TrialReport,
};
