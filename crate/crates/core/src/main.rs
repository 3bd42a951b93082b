use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use nonequibath::cli::{run, CliError, Command};

/// Stationary kinetics of an N-level atom in a non-equilibrium radiation field.
#[derive(Debug, Parser)]
#[command(name = "nonequibath", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,

    /// Write CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn execute(args: &Args) -> Result<(), CliError> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| CliError::config(format!("{}: {e}", args.config.display())))?;
    let output = run(args.command, &text)?;
    eprint!("{}", output.summary);
    match &args.out {
        Some(path) => std::fs::write(path, output.data)
            .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?,
        None => print!("{}", output.data),
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
