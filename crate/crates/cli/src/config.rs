//! Command-line flags, the optional TOML file, and their merge.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use axelrod_core::{parse_seed, Fault, Initial, Mode, StopRule, SystemParams, Topology};
use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::grid::parse_sample_grid;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "AXELROD_OUT";
const DEFAULT_OUT: &str = "axelrod-out";

#[derive(Debug, Parser)]
#[command(name = "axelrod", version, about = "Axelrod model and annihilating random walks on 1D lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run replicas; write absorption and density tables.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Also write one JSONL snapshot stream per replica.
        #[arg(long)]
        snapshots: bool,
    },
    /// Absorption statistics over a grid of (F, q, N).
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',')]
        grid_features: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        grid_states: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        grid_sizes: Vec<usize>,
    },
    /// Space-time PGM images of the particle system.
    Raster {
        #[command(flatten)]
        common: Common,
        /// Level (1-based) shown in the single-level panel.
        #[arg(long)]
        level: Option<usize>,
        /// Number of time bins (image columns).
        #[arg(long)]
        bins: Option<usize>,
    },
    /// Run the culture chain and the particle system on shared marks and
    /// compare them after every event.
    Couple {
        #[command(flatten)]
        common: Common,
        /// Inject a deliberate error: halved-rate, flipped-direction,
        /// coalescence, swapped-adoption or skipped-edge.
        #[arg(long)]
        fault: Option<String>,
    },
    /// Empirical acceptance frequency at j-sites against r(j).
    Audit {
        #[command(flatten)]
        common: Common,
        /// Marks required per occupancy class.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        max_replicas: Option<usize>,
    },
}

#[derive(Debug, Default, Clone, Args)]
pub struct Common {
    /// TOML file with any of the flag names (underscores for dashes).
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub features: Option<usize>,
    #[arg(long)]
    pub states: Option<u32>,
    #[arg(long)]
    pub size: Option<usize>,
    /// torus, path or killed-half-line.
    #[arg(long)]
    pub topology: Option<String>,
    /// Master seed, decimal or 0x-hex.
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub replicas: Option<u64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub events_max: Option<u64>,
    /// geom:T0:FACTOR:COUNT, lin:T0:T1:COUNT or a comma list.
    #[arg(long)]
    pub sample_grid: Option<String>,
    /// Output directory (default: $AXELROD_OUT, else ./axelrod-out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for replicas.
    #[arg(long)]
    pub workers: Option<usize>,
    /// uniform, monoculture or half-line.
    #[arg(long)]
    pub init: Option<String>,
    /// vertex or interface.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(untagged)]
enum SeedValue {
    Int(u64),
    Text(String),
    #[default]
    Unset,
}

/// Keys accepted in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    features: Option<usize>,
    states: Option<u32>,
    size: Option<usize>,
    topology: Option<String>,
    #[serde(default)]
    seed: SeedValue,
    replicas: Option<u64>,
    t_max: Option<f64>,
    events_max: Option<u64>,
    sample_grid: Option<String>,
    out: Option<PathBuf>,
    workers: Option<usize>,
    init: Option<String>,
    mode: Option<String>,
    level: Option<usize>,
    bins: Option<usize>,
    fault: Option<String>,
    trials: Option<u64>,
    max_replicas: Option<usize>,
    snapshots: Option<bool>,
    grid_features: Option<Vec<usize>>,
    grid_states: Option<Vec<u32>>,
    grid_sizes: Option<Vec<usize>>,
}

/// Everything a subcommand needs, after merging file and flags.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub params: SystemParams,
    pub replicas: u64,
    pub sample_times: Vec<f64>,
    pub out: PathBuf,
    pub workers: Option<usize>,
    pub init: Initial,
    pub mode: Mode,
    /// Zero-based level for the raster's single-level panel.
    pub level: usize,
    pub bins: usize,
    pub fault: Option<Fault>,
    pub trials: u64,
    pub max_replicas: usize,
    pub snapshots: bool,
    pub grid_features: Vec<usize>,
    pub grid_states: Vec<u32>,
    pub grid_sizes: Vec<usize>,
}

/// Subcommand-specific flags, already parsed.
#[derive(Debug, Default)]
pub struct Extra {
    pub level: Option<usize>,
    pub bins: Option<usize>,
    pub fault: Option<String>,
    pub trials: Option<u64>,
    pub max_replicas: Option<usize>,
    pub snapshots: bool,
    pub grid_features: Vec<usize>,
    pub grid_states: Vec<u32>,
    pub grid_sizes: Vec<usize>,
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    toml::from_str(&text).map_err(|e| usage_error(format!("config {}: {e}", path.display())))
}

/// Marks an error as a usage problem (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage_error(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn parse_init(s: &str) -> Result<Initial> {
    match s {
        "uniform" => Ok(Initial::Uniform),
        "monoculture" => Ok(Initial::Monoculture),
        "half-line" => Ok(Initial::HalfLine),
        _ => Err(usage_error(format!("unknown initial condition {s:?}"))),
    }
}

fn parse_mode(s: &str) -> Result<Mode> {
    match s {
        "vertex" => Ok(Mode::Vertex),
        "interface" => Ok(Mode::Interface),
        _ => Err(usage_error(format!("unknown mode {s:?}"))),
    }
}

/// Per-subcommand defaults that differ from the global ones.
#[derive(Debug, Clone, Copy, Default)]
pub struct Defaults {
    pub stop: Option<StopRule>,
}

pub fn resolve(common: &Common, extra: Extra, defaults: Defaults) -> Result<ExperimentConfig> {
    let file = match &common.config {
        Some(p) => read_file(p)?,
        None => FileConfig::default(),
    };
    let features = common.features.or(file.features).unwrap_or(3);
    let states = common.states.or(file.states).unwrap_or(2);
    let size = common.size.or(file.size).unwrap_or(200);
    let topology: Topology = match common.topology.clone().or(file.topology) {
        Some(t) => t.parse().map_err(|e: axelrod_core::Error| usage_error(e.to_string()))?,
        None => Topology::Torus,
    };
    let seed_text = match (&common.seed, &file.seed) {
        (Some(s), _) | (None, SeedValue::Text(s)) => Some(s.as_str()),
        _ => None,
    };
    let seed = match (seed_text, &file.seed) {
        (Some(s), _) => parse_seed(s).map_err(|e| usage_error(e.to_string()))?,
        (None, SeedValue::Int(v)) => *v,
        (None, _) => 0,
    };
    let t_max = common.t_max.or(file.t_max);
    let events_max = common.events_max.or(file.events_max);
    let stop = match (t_max, events_max) {
        (None, None) => defaults.stop.unwrap_or_else(StopRule::until_absorbed),
        (t, n) => StopRule { max_time: t, max_events: n },
    };
    let params = SystemParams::new(features, states, size, topology, seed)
        .map_err(|e| usage_error(e.to_string()))?
        .with_stop(stop);
    params.validate().map_err(|e| usage_error(e.to_string()))?;

    let killed = topology == Topology::KilledHalfLine;
    let init = match common.init.clone().or(file.init) {
        Some(s) => parse_init(&s)?,
        None if killed => Initial::HalfLine,
        None => Initial::Uniform,
    };
    let mode = match common.mode.clone().or(file.mode) {
        Some(s) => parse_mode(&s)?,
        None if killed => Mode::Interface,
        None => Mode::Vertex,
    };
    let replicas = common.replicas.or(file.replicas).unwrap_or(1);
    if replicas == 0 {
        bail!(usage_error("replicas must be at least 1"));
    }
    let grid = common.sample_grid.clone().or(file.sample_grid).unwrap_or_else(|| "geom:1:2:21".into());
    let mut sample_times = parse_sample_grid(&grid).map_err(|e| usage_error(format!("{e:#}")))?;
    if let Some(t) = t_max {
        sample_times.retain(|&s| s <= t);
    }
    let out = common
        .out
        .clone()
        .or(file.out)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    let workers = common.workers.or(file.workers);
    if workers == Some(0) {
        bail!(usage_error("workers must be at least 1"));
    }
    let level = extra.level.or(file.level).unwrap_or(1);
    if level == 0 || level > features {
        bail!(usage_error(format!("level must be in 1..={features}, got {level}")));
    }
    let bins = extra.bins.or(file.bins).unwrap_or(200);
    if bins == 0 {
        bail!(usage_error("bins must be at least 1"));
    }
    let fault = match extra.fault.or(file.fault) {
        Some(name) => Some(Fault::from_name(&name).ok_or_else(|| usage_error(format!("unknown fault {name:?}")))?),
        None => None,
    };
    fn pick<T>(cli: Vec<T>, file: Option<Vec<T>>, default: Vec<T>) -> Vec<T> {
        if !cli.is_empty() {
            cli
        } else {
            file.unwrap_or(default)
        }
    }
    let grid_features = pick(extra.grid_features, file.grid_features, vec![2, 3]);
    let grid_states = pick(extra.grid_states, file.grid_states, vec![2, 3, 4]);
    let grid_sizes = pick(extra.grid_sizes, file.grid_sizes, vec![200, 600]);
    if grid_features.is_empty() || grid_states.is_empty() || grid_sizes.is_empty() {
        bail!(usage_error("sweep grids must be non-empty"));
    }
    Ok(ExperimentConfig {
        params,
        replicas,
        sample_times,
        out,
        workers,
        init,
        mode,
        level: level - 1,
        bins,
        fault,
        trials: extra.trials.or(file.trials).unwrap_or(10_000),
        max_replicas: extra.max_replicas.or(file.max_replicas).unwrap_or(1000),
        snapshots: extra.snapshots || file.snapshots.unwrap_or(false),
        grid_features,
        grid_states,
        grid_sizes,
    })
}
