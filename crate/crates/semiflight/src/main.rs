use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use semiflight::{run, ExperimentConfig};

/// Monte Carlo experiments for semi-Markov random flights.
#[derive(Parser, Debug)]
#[command(name = "semiflight", version)]
struct Cli {
    /// flight, limit, scaled, telegraph, wave-repr, verify-laws or symbol-check
    experiment: String,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Config overrides as `--key value`.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
    overrides: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = ExperimentConfig::load(&cli.experiment, cli.config.as_deref(), &cli.overrides)
        .map_err(Into::into)
        .and_then(|c| run(&c));
    match result {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("semiflight: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
