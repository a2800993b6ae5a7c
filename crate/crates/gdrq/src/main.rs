use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = gdrq::cli::Cli::parse();
    let stdout = std::io::stdout();
    match gdrq::cli::run(&cli, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gdrq: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
