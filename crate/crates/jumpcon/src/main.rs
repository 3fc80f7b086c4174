use std::process::ExitCode;

use clap::Parser;
use jumpcon::cli::{ceiling_from, execute, Cli, CliError, Outcome, CEILING_VAR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let var = std::env::var(CEILING_VAR).ok();
    let result = ceiling_from(var.as_deref()).map_err(CliError::Input).and_then(|c| execute(cli, c));
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Failed(name)) => {
            eprintln!("jumpcon: check failed: {name}");
            ExitCode::from(1)
        }
        Err(e) => {
            let (CliError::Input(inner) | CliError::Math(inner)) = &e;
            eprintln!("jumpcon: {inner:#}");
            ExitCode::from(e.code())
        }
    }
}
