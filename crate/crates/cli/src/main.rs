use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let config = match su11_cli::parse_args(std::env::args_os().skip(1)) {
        Ok(config) => config,
        Err(su11_cli::CliError::Parse(e)) => {
            // Help and version go to stdout with status 0; clap decides.
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let outcome = su11_cli::run(&config);
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    ExitCode::from(outcome.exit_code as u8)
}
