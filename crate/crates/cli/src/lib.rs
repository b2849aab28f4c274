//! Command-line front end for `losdof`: argument parsing, JSON config
//! merging, unit scaling and the CSV/JSON file formats.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod units;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use error::{CliError, CliResult};

use commands::{BandwidthProfileArgs, ChannelSvdArgs, KGridArgs, KNumberArgs, RegionBoundaryArgs, ScenarioMapArgs};
use verify::VerifyArgs;
use config::ConfigFile;
use units::Units;

#[derive(Debug, Parser)]
#[command(name = "losdof", version, about = "Spatial bandwidth and degrees of freedom of line-of-sight array links")]
pub struct Cli {
    /// JSON config; flags given here override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Wavelength in meters. Lengths are then read and written in meters.
    #[arg(long, global = true, value_name = "METERS")]
    pub wavelength: Option<f64>,
    /// Read and write angles in degrees.
    #[arg(long, global = true)]
    pub degrees: bool,
    /// Worker threads for map and curve computations (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pointwise bandwidth over the effective receive interval (CSV `l,w`).
    #[command(allow_negative_numbers = true)]
    BandwidthProfile(BandwidthProfileArgs),
    /// K number, its bounds and linear approximation (JSON).
    #[command(allow_negative_numbers = true)]
    KNumber(KNumberArgs),
    /// K number, bounds and linear approximation over an (r, θ) grid (CSV).
    #[command(allow_negative_numbers = true)]
    KGrid(KGridArgs),
    /// Spatial multiplexing region boundary over a polar-angle grid (CSV).
    #[command(allow_negative_numbers = true)]
    RegionBoundary(RegionBoundaryArgs),
    /// Singular values of the sampled channel matrix (CSV + JSON sidecar).
    #[command(allow_negative_numbers = true)]
    ChannelSvd(ChannelSvdArgs),
    /// K number over a ground grid for an elevated source (CSV + JSON).
    #[command(allow_negative_numbers = true)]
    ScenarioMap(ScenarioMapArgs),
    /// Randomised comparison of closed forms against brute-force oracles.
    Verify(VerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::BandwidthProfile(_) => "bandwidth-profile",
            Self::KNumber(_) => "k-number",
            Self::KGrid(_) => "k-grid",
            Self::RegionBoundary(_) => "region-boundary",
            Self::ChannelSvd(_) => "channel-svd",
            Self::ScenarioMap(_) => "scenario-map",
            Self::Verify(_) => "verify",
        }
    }
}

/// Receive orientation on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionArg {
    X,
    Y,
    Z,
    /// Any unit vector, given with `--v-hat`.
    Generic,
}

/// Options shared by every subcommand after merging with the config file.
#[derive(Debug, Clone, Copy)]
pub struct Globals {
    pub units: Units,
    pub threads: Option<usize>,
}

impl Globals {
    /// Runs `f` on a pool of the requested size.
    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> CliResult<T> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
        Ok(pool.install(f))
    }
}

fn globals(cli: &Cli, cfg: &ConfigFile) -> CliResult<Globals> {
    fn field<T: serde::de::DeserializeOwned>(cfg: &ConfigFile, key: &str) -> CliResult<Option<T>> {
        cfg.get(key)
            .map(|v| serde_json::from_value(v.clone()).map_err(|e| CliError::Config(format!("`{key}`: {e}"))))
            .transpose()
    }
    let wavelength = cli.wavelength.map_or_else(|| field(cfg, "wavelength"), |w| Ok(Some(w)))?;
    let degrees = cli.degrees || field::<bool>(cfg, "degrees")?.unwrap_or(false);
    let threads = cli.threads.map_or_else(|| field(cfg, "threads"), |t| Ok(Some(t)))?;
    if threads == Some(0) {
        return Err(CliError::Usage("--threads must be at least 1".into()));
    }
    Ok(Globals {
        units: Units::new(wavelength, degrees)?,
        threads,
    })
}

/// Executes a parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let g = globals(&cli, &cfg)?;
    let name = cli.command.name();
    match &cli.command {
        Command::BandwidthProfile(a) => commands::bandwidth_profile(&cfg.merge(name, a)?, &g),
        Command::KNumber(a) => commands::k_number(&cfg.merge(name, a)?, &g),
        Command::KGrid(a) => commands::k_grid(&cfg.merge(name, a)?, &g),
        Command::RegionBoundary(a) => commands::region_boundary(&cfg.merge(name, a)?, &g),
        Command::ChannelSvd(a) => commands::channel_svd(&cfg.merge(name, a)?, &g),
        Command::ScenarioMap(a) => commands::scenario_map(&cfg.merge(name, a)?, &g),
        Command::Verify(a) => verify::run(&cfg.merge(name, a)?, &g),
    }
}
