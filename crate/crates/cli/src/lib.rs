//! Command-line experiments over the `axelrod-core` simulator.

pub mod commands;
pub mod config;
pub mod grid;
pub mod output;
pub mod raster;

use std::ffi::OsString;
use std::process::ExitCode;

use anyhow::Result;
use axelrod_core::StopRule;
use clap::Parser;

use commands::Status;
use config::{resolve, Cli, Command, Defaults, ExperimentConfig, Extra, UsageError};
use output::transactional;

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

type Runner = fn(&ExperimentConfig, &mut output::Outputs) -> Result<Status>;

fn plan(command: Command) -> Result<(ExperimentConfig, Runner)> {
    Ok(match command {
        Command::Simulate { common, snapshots } => {
            (resolve(&common, Extra { snapshots, ..Default::default() }, Defaults::default())?, commands::simulate)
        }
        Command::Sweep { common, grid_features, grid_states, grid_sizes } => (
            resolve(
                &common,
                Extra { grid_features, grid_states, grid_sizes, ..Default::default() },
                Defaults::default(),
            )?,
            commands::sweep,
        ),
        Command::Raster { common, level, bins } => {
            (resolve(&common, Extra { level, bins, ..Default::default() }, Defaults::default())?, commands::raster)
        }
        Command::Couple { common, fault } => (
            resolve(
                &common,
                Extra { fault, ..Default::default() },
                Defaults { stop: Some(StopRule::events(100_000)) },
            )?,
            commands::couple,
        ),
        Command::Audit { common, trials, max_replicas } => (
            resolve(&common, Extra { trials, max_replicas, ..Default::default() }, Defaults::default())?,
            commands::audit,
        ),
    })
}

fn execute(command: Command) -> Result<Status> {
    let (cfg, run) = plan(command)?;
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(w) = cfg.workers {
            b = b.num_threads(w);
        }
        b.build()?
    };
    pool.install(|| transactional(&cfg.out, |out| run(&cfg, out)))
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<UsageError>().is_some()
            || matches!(
                c.downcast_ref::<axelrod_core::Error>(),
                Some(axelrod_core::Error::Usage(_) | axelrod_core::Error::Config(_) | axelrod_core::Error::Parse(_))
            )
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { EXIT_USAGE } else { EXIT_CHECK_FAILED })
        }
    }
}
