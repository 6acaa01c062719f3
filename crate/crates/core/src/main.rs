use clap::error::ErrorKind;
use clap::Parser;
use varprod::harness::{self, Command};

/// Evaluate and verify product-form variance uncertainty bounds.
#[derive(Parser)]
#[command(name = "varprod", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => err.exit(),
            _ => {
                let _ = err.print();
                std::process::exit(harness::EXIT_PARSE as i32);
            }
        },
    };
    std::process::exit(harness::run(&cli.command) as i32);
}
