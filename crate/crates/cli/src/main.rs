use std::process::ExitCode;

use clap::Parser;

use qu8it_cli::commands::run;
use qu8it_cli::config::RunConfig;
use qu8it_cli::{Cli, EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_command(&cli.command).and_then(|cfg| run(&cfg));
    let code = match outcome {
        Ok(out) => {
            print!("{}", out.text);
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            if out.success {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    };
    ExitCode::from(code as u8)
}
