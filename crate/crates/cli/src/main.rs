mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{CliError, Report};

fn emit(cli: &Cli, report: &Report) -> Result<(), CliError> {
    let rendered = match cli.format {
        Format::Json => output::json(&report.tree),
        Format::Text => output::text(&report.title, &report.tree),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = commands::dispatch(&cli.command).and_then(|report| {
        emit(&cli, &report)?;
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
