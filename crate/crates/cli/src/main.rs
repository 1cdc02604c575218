use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use reality_steer::Execution;
use reality_steer_cli::{cmd_run, cmd_sweep, cmd_verify, parse_config, CliError, Config, Format, Options};

#[derive(Parser, Debug)]
#[command(name = "reality-steer", version, about = "Branch-steering protocol simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report destination (defaults to the config's output_path, then stdout)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads; 1 runs sequentially
    #[arg(long, global = true, env = "REALITY_STEER_THREADS")]
    threads: Option<usize>,

    /// Overrides the trial count of the config
    #[arg(long, global = true)]
    trials: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a trial ensemble described by a [run] config
    Run { config: PathBuf },
    /// Run verification checks
    Verify {
        /// Check names, comma separated, or `all`
        #[arg(long, value_delimiter = ',', default_value = "all")]
        suite: Vec<String>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Run a parameter sweep described by a [sweep] config
    Sweep { config: PathBuf },
}

fn execution(threads: Option<usize>) -> Result<Execution, CliError> {
    match threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(1) => Ok(Execution::Sequential),
        #[cfg(feature = "parallel")]
        Some(n) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))?;
            Ok(Execution::Parallel)
        }
        #[cfg(not(feature = "parallel"))]
        Some(_) => Ok(Execution::Sequential),
        None => Ok(Execution::Parallel),
    }
}

fn dispatch(cli: Cli) -> Result<u8, CliError> {
    let opts = Options {
        exec: execution(cli.threads)?,
        out: cli.out,
        trials: cli.trials,
        format: cli.format,
        threads: cli.threads,
    };
    match cli.command {
        Command::Run { config } => match parse_config(&config)? {
            Config::Run(run) => cmd_run(&run, &opts),
            Config::Sweep(_) => Err(CliError::Usage(format!(
                "{} is a sweep config; use `sweep`",
                config.display()
            ))),
        },
        Command::Sweep { config } => match parse_config(&config)? {
            Config::Sweep(sweep) => cmd_sweep(&sweep, &opts),
            Config::Run(_) => Err(CliError::Usage(format!(
                "{} is a run config; use `run`",
                config.display()
            ))),
        },
        Command::Verify { suite, seed } => cmd_verify(&suite, seed, &opts),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("reality-steer: {e}");
            e.exit_code()
        }
    }
}
