mod args;
mod commands;
mod config;
mod io;
mod manifest;
mod pipeline;

use std::process::ExitCode;

use clap::Parser;
use xling_core::{Error, Result};

use crate::args::Cli;
use crate::config::ConfigFile;

fn run(cli: &Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    commands::run(&cli.command, &config)
}

fn report(e: &Error) {
    let body = serde_json::json!({
        "error": {
            "kind": e.kind(),
            "message": e.to_string(),
            "exit_code": e.exit_code(),
        }
    });
    eprintln!("{body}");
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
