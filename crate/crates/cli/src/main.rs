mod cli;
mod commands;
mod config;
mod error;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::Cli;
use crate::error::CliError;

fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = commands::assemble(&cli.command)?;
    if cli.command.common().dump_config {
        // building the mode validates the config before it is written out
        cfg.build_mode()?;
        let text = cfg.to_toml()?;
        return std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e));
    }
    let report = commands::run(cli.command.name(), &cfg)?;
    match &cfg.output.dir {
        Some(dir) => report.write_dir(dir),
        None => std::io::stdout()
            .write_all(report.to_stdout_text().as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
