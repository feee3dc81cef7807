use std::io::{self, Write};
use std::process::ExitCode;

use optproof_cli::{run, CliError};

fn main() -> ExitCode {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = run(std::env::args_os(), &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Help(text)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("optproof: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
