//! `razavy-dw`: scenario runner for two coupled Razavy double wells.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use config::{Command, Options, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "razavy-dw",
    version,
    about = "Tunneling and entanglement in coupled Razavy double wells"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let cfg = RunConfig::resolve(cli.command, cli.options)?;
    let table = commands::run(&cfg)?;
    output::emit(&table, &cfg)
}
