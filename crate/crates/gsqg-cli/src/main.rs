use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gsqg_cli::{CliError, Experiment, ExperimentConfig};

#[derive(Parser)]
#[command(name = "gsqg", version, about = "Pseudo-spectral experiments on generalized SQG fronts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run { config: PathBuf },
    /// Validate a config without running it.
    Check { config: PathBuf },
    /// Print the available experiments.
    ListExperiments,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(command: Command) -> Result<u8, CliError> {
    gsqg_cli::init_threads()?;
    match command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let summary = gsqg_cli::run(&cfg)?;
            for c in &summary.criteria {
                println!("{}", c.line());
            }
            println!("artifacts in {}", cfg.output_dir.display());
            Ok(if summary.passed { 0 } else { 1 })
        }
        Command::Check { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            cfg.validate()?;
            println!("{}: ok", config.display());
            Ok(0)
        }
        Command::ListExperiments => {
            for e in Experiment::ALL {
                let ids: Vec<String> = e.criteria().iter().map(|c| c.to_string()).collect();
                println!("{:<18} criteria {:<5} {}", e.name(), ids.join(","), e.summary());
            }
            Ok(0)
        }
    }
}
