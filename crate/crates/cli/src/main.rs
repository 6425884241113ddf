use std::fs::File;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use sinc_cli::{run, CliError, RunConfig};

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let summary: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty() && !l.starts_with("For more information"))
                .collect();
            return fail(&CliError::Usage(summary.join(" ").trim_start_matches("error: ").to_string()));
        }
    };
    match execute(&config) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

// Output is held back until the run succeeds, so a failure leaves no partial file.
fn execute(config: &RunConfig) -> Result<(), CliError> {
    let mut buffer = Vec::new();
    run(config, &mut buffer)?;
    match &config.output {
        Some(path) => File::create(path)?.write_all(&buffer)?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&buffer)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.one_line());
    ExitCode::from(e.exit_code())
}
