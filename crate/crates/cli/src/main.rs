use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use ubb_plan::{run, Cli, CliError};

fn write_output(target: &str, text: &str) -> Result<(), CliError> {
    if target == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| CliError::Io(format!("stdout: {e}")))
    } else {
        std::fs::write(target, text).map_err(|e| CliError::Io(format!("{target}: {e}")))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|output| {
        for w in &output.warnings {
            eprintln!("warning: {w}");
        }
        write_output(&cli.out, &output.csv)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
