use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dampwave::cli::{execute, Command, RunManifest};

#[derive(Parser)]
#[command(name = "dampwave", version, about = "Damped 1D wave equation in Riemann invariants")]
struct Args {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one simulation and fit decay rates.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Repeat a simulation over values of one key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        vary: String,
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Randomized checks of the supporting inequalities.
    VerifyLemmas {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, hide = true)]
        force_violation: bool,
    },
    /// Compare an undamped run with the d'Alembert solution.
    OracleCompare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let manifest = match args.command {
        Cmd::Simulate { config, out } => RunManifest {
            command: Command::Simulate,
            config_path: Some(config),
            output_dir: out,
            seed: 0,
        },
        Cmd::Sweep { config, vary, values, out } => RunManifest {
            command: Command::Sweep { vary, values },
            config_path: Some(config),
            output_dir: out,
            seed: 0,
        },
        Cmd::VerifyLemmas { seed, trials, out, force_violation } => RunManifest {
            command: Command::VerifyLemmas { trials, force_violation },
            config_path: None,
            output_dir: out,
            seed,
        },
        Cmd::OracleCompare { config, out } => RunManifest {
            command: Command::OracleCompare,
            config_path: Some(config),
            output_dir: out,
            seed: 0,
        },
    };
    ExitCode::from(execute(&manifest) as u8)
}
