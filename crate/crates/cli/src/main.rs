use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qworlds_cli::{execute, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match execute(&RunConfig::from(cli)) {
        Ok(Some(text)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(qworlds_cli::EXIT_IO as u8);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qworlds: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
