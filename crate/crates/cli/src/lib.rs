//! Command-line front end for `reality-steer`: configuration files,
//! ensembles, sweeps and the verification suite.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::{
    cmd_run, cmd_sweep, cmd_verify, run_payload, sweep_payload, verify_payload, Format, Options,
    Report, RunPayload, SweepPayload, SweepRow, VerifyPayload,
};
pub use config::{parse_config, parse_config_str, Config, ConfigError, RunConfig, SweepAxis, SweepConfig};
pub use error::CliError;
