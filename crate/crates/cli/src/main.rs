mod args;
mod bench;
mod commands;
mod output;
mod streams;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Violation,
}

/// Exit codes: 0 success, 1 violation, 2 parse or argument error, 3 semantic
/// error (unknown or duplicate ids, mismatched dimensions, sizes too large).
fn exit_code(err: &anyhow::Error) -> u8 {
    use lso_core::Error as E;
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<E>() {
        Some(E::Parse { .. } | E::Parameter(_) | E::CoordinateRange(_) | E::Dimension(_) | E::Format(_) | E::Empty) => 2,
        Some(_) => 3,
        None => 2,
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("LSO_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| anyhow::anyhow!("LSO_THREADS must be a positive integer, got {v:?}"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    init_threads()?;
    match cli.command {
        Command::Build(a) => commands::build(a),
        Command::Verify(a) => commands::verify(a),
        Command::Stream(a) => streams::stream(a),
        Command::Bcp(a) => streams::bcp(a),
        Command::Spanner(a) => commands::spanner(a),
        Command::PackSphere(a) => commands::pack_sphere(a),
        Command::GridOrders(a) => commands::grid_orders(a),
        Command::Lowerbound(a) => commands::lowerbound(a),
        Command::Bench(a) => bench::bench(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
