//! Library side of the `dimers` binary, so the subcommands are testable
//! without spawning a process.

pub mod args;
pub mod commands;
pub mod golden;
pub mod verify;

use args::{Cli, Command};
use dimers::asymptotics::AsymptoticsError;
use dimers::graphs::GraphError;
use dimers::oracle::OracleError;
use dimers::recursion::RecursionError;

/// Exit statuses.
pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_LIMIT: u8 = 3;

pub fn run(cli: &Cli) -> anyhow::Result<commands::Outcome> {
    match &cli.command {
        Command::Build(a) => commands::build(a),
        Command::Count(a) => commands::count(a),
        Command::Recurse(a) => commands::recurse(a),
        Command::Ratios(a) => commands::ratios(a),
        Command::Entropy(a) => commands::entropy(a),
        Command::Verify(a) => commands::verify(a),
    }
}

fn graph_status(e: &GraphError) -> u8 {
    match e {
        GraphError::ResourceLimit { .. } => EXIT_LIMIT,
        _ => EXIT_USAGE,
    }
}

fn oracle_status(e: &OracleError) -> u8 {
    match e {
        OracleError::BudgetExhausted { .. } => EXIT_LIMIT,
        _ => EXIT_CHECK_FAILED,
    }
}

fn recursion_status(e: &RecursionError) -> u8 {
    match e {
        RecursionError::ResourceLimit { .. } => EXIT_LIMIT,
        RecursionError::ZeroInput => EXIT_USAGE,
        RecursionError::Oracle(o) => oracle_status(o),
        RecursionError::Graph(g) => graph_status(g),
        _ => EXIT_CHECK_FAILED,
    }
}

/// Maps an error to the exit status: resource and precision limits are 3,
/// out-of-domain requests 2, anything else 1.
pub fn exit_status(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<AsymptoticsError>() {
        return match e {
            AsymptoticsError::Domain(_) => EXIT_USAGE,
            AsymptoticsError::Recursion(r) => recursion_status(r),
            _ => EXIT_LIMIT,
        };
    }
    if let Some(e) = err.downcast_ref::<RecursionError>() {
        return recursion_status(e);
    }
    if let Some(e) = err.downcast_ref::<GraphError>() {
        return graph_status(e);
    }
    if let Some(e) = err.downcast_ref::<OracleError>() {
        return oracle_status(e);
    }
    EXIT_CHECK_FAILED
}
