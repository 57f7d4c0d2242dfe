mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use commands::{dispatch, parse_tolerances, RunContext};

fn run(cli: Cli) -> anyhow::Result<bool> {
    if !(cli.global.hbar > 0.0 && cli.global.hbar.is_finite()) {
        anyhow::bail!("--hbar must be positive, got {}", cli.global.hbar);
    }
    let cx = RunContext {
        hbar: cli.global.hbar,
        tol: parse_tolerances(&cli.global.tol)?,
        sink: output::Sink::new(cli.global.out.clone())?,
    };
    dispatch(&cx, cli.command)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv = match config::inject(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let cli = Cli::try_parse_from(argv).unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
