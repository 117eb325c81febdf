//! `freeprob`: batch front end for the freeprob toolkit.
//!
//! Exit status 0 when every check passes, 1 on a failed check or a domain or
//! numeric error, 2 on an invalid configuration.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use commands::{characterize, convolve, identity_check, my_verify, partitions, rmt, subord, Common, Report};
use config::CliError;

/// Environment variable holding the worker thread count.
const THREADS_ENV: &str = "FREEPROB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "freeprob", version, about = "Free probability toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count or list interval and non-crossing partitions.
    Partitions(partitions::Args),
    /// Density of a free additive convolution.
    Convolve(convolve::Args),
    /// Subordination functions on a grid of points.
    Subord(subord::Args),
    /// Boolean-cumulant series against their closed forms.
    IdentityCheck(identity_check::Args),
    /// Regression equations and marginal laws of the Matsumoto-Yor pair.
    MyVerify(my_verify::Args),
    /// Laws recovered from regression constants.
    Characterize(characterize::Args),
    /// Random-matrix check of the Matsumoto-Yor property.
    Rmt(rmt::Args),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Partitions(_) => "partitions",
            Command::Convolve(_) => "convolve",
            Command::Subord(_) => "subord",
            Command::IdentityCheck(_) => "identity-check",
            Command::MyVerify(_) => "my-verify",
            Command::Characterize(_) => "characterize",
            Command::Rmt(_) => "rmt",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Partitions(a) => &a.common,
            Command::Convolve(a) => &a.common,
            Command::Subord(a) => &a.common,
            Command::IdentityCheck(a) => &a.common,
            Command::MyVerify(a) => &a.common,
            Command::Characterize(a) => &a.common,
            Command::Rmt(a) => &a.common,
        }
    }
}

/// Prints the defaults, or builds the configuration and runs it.
fn dispatch<C: Serialize>(
    common: &Common,
    default: C,
    config: impl FnOnce() -> Result<C, CliError>,
    run: impl FnOnce(&C) -> Result<Report, CliError>,
) -> Result<Option<Report>, CliError> {
    if common.show_defaults {
        let v = serde_json::to_value(default).expect("configurations serialize");
        print!("{}", output::to_json(&v));
        return Ok(None);
    }
    let cfg = config()?;
    run(&cfg).map(Some)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::schema(THREADS_ENV, format!("expected a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::schema(THREADS_ENV, e.to_string()))
}

fn execute(cmd: &Command) -> Result<Option<Report>, CliError> {
    configure_threads()?;
    let common = cmd.common();
    match cmd {
        Command::Partitions(a) => dispatch(common, partitions::PartitionsConfig::default(), || partitions::config(a), partitions::run),
        Command::Convolve(a) => dispatch(common, convolve::ConvolveConfig::default(), || convolve::config(a), convolve::run),
        Command::Subord(a) => dispatch(common, subord::SubordConfig::default(), || subord::config(a), subord::run),
        Command::IdentityCheck(a) => dispatch(
            common,
            identity_check::IdentityCheckConfig::default(),
            || identity_check::config(a),
            identity_check::run,
        ),
        Command::MyVerify(a) => dispatch(common, my_verify::MyVerifyConfig::default(), || my_verify::config(a), my_verify::run),
        Command::Characterize(a) => dispatch(
            common,
            characterize::CharacterizeConfig::default(),
            || characterize::config(a),
            characterize::run,
        ),
        Command::Rmt(a) => dispatch(common, rmt::RmtConfig::default(), || rmt::config(a), rmt::run),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = execute(&cli.command).and_then(|report| {
        let Some(report) = report else { return Ok(true) };
        if let Some(path) = &cli.command.common().json {
            output::write_json(path, &report.summary)?;
        }
        match &report.text {
            Some(t) => print!("{t}"),
            None => print!("{}", output::to_json(&report.summary)),
        }
        Ok(report.pass)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: some checks failed");
            ExitCode::from(1)
        }
        Err(e) => {
            print!("{}", output::to_json(&e.diagnostic(name)));
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
