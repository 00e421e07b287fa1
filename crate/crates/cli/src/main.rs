use std::process::ExitCode;

use clap::Parser;
use tailscope_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match tailscope_cli::run(&cli) {
        Ok(summary) => {
            for path in &summary.written {
                println!("{}", path.display());
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
