use clap::Parser;
use hexheight_cli::{run, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    // Spec'd exit codes: 0 success, 1 usage or I/O error, 2 when a
    // theorem-backed check failed (clap's own code 2 is remapped).
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("hexheight: a theorem-backed check failed (see output rows)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("hexheight: {e:#}");
            ExitCode::from(1)
        }
    }
}
