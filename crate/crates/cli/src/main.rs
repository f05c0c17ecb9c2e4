use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use ordsearch_cli::{run, Cli, CliError};

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let output = match &result {
        Ok(text) => Some(text.as_str()),
        Err(CliError::Violation { output, .. }) => output.as_deref(),
        Err(_) => None,
    };
    if let Some(text) = output {
        if let Err(e) = emit(&cli, text) {
            eprintln!("ordsearch: io error: {e}");
            return ExitCode::from(1);
        }
    }
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ordsearch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
