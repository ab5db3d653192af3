#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use config::{Format, RunConfig};
use std::io::Write;
use std::process::ExitCode;

/// Coulomb bound states of spin-0 and spin-1/2 particles under the extended
/// uncertainty principle.
#[derive(Parser)]
#[command(name = "eup-coulomb", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form levels for one or more states.
    Spectrum(RunConfig),
    /// The hydrogen-like level table with reference digits for comparison.
    Table(RunConfig),
    /// Energy series in N or Z with validity flags.
    Scan(RunConfig),
    /// Normalized radial function on a θ grid.
    Wavefunction(RunConfig),
    /// Closed forms against root-finding, ODE shooting and the branch identity.
    Verify(RunConfig),
}

fn run(cli: Cli) -> Result<u8> {
    let (run, cfg): (fn(RunConfig) -> Result<commands::Outcome>, RunConfig) = match cli.command {
        Command::Spectrum(c) => (commands::spectrum, c),
        Command::Table(c) => (commands::table, c),
        Command::Scan(c) => (commands::scan, c),
        Command::Wavefunction(c) => (commands::wavefunction, c),
        Command::Verify(c) => (commands::verify, c),
    };
    let cfg = cfg.merged()?;
    log::info!("resolved config: {cfg:?}");
    let out_path = cfg.out.clone();
    let outcome = run(cfg)?;
    let format = outcome.document.config.format.unwrap_or(Format::Csv);
    let text = outcome.document.render(format)?;
    match out_path {
        Some(p) => std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(m) = outcome.message {
        eprintln!("{m}");
    }
    Ok(outcome.status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
