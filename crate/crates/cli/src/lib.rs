//! `ubb-plan`: batch front end for the `ubb-core` planning models.
//!
//! Each subcommand reads flags and/or a scenario file and renders one CSV
//! document. Output is deterministic for identical inputs.

pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::Output;
pub use error::{CliError, Result};
pub use output::Precision;

use commands::{HitRatioArgs, TableArgs, DEFAULT_PLR_GRID_PCT, DEFAULT_RTT_GRID_MS};

#[derive(Debug, Parser)]
#[command(name = "ubb-plan", version, about = "Ultra-broadband capacity planning models")]
pub struct Cli {
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,

    /// Output file, or `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    pub out: String,

    /// `table`: Mbit/s with one decimal; `full`: bit/s at full precision.
    #[arg(long, global = true, value_enum, default_value_t = Precision::Table)]
    pub precision: Precision,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Loss/latency throughput bound over an RTT x PLR grid.
    ThroughputTable {
        /// RTT grid in milliseconds, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        rtt: Vec<f64>,
        /// PLR grid in percent, comma separated.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        plr: Vec<f64>,
        /// Maximum segment size in bytes.
        #[arg(long, default_value_t = 1460.0)]
        mss: f64,
        /// Congestion-control constant.
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Decimals of the Mbit/s cells in table precision.
        #[arg(long, default_value_t = 0)]
        decimals: usize,
    },
    /// Network speed-up versus number of access nodes with edge caches.
    NsuCurve {
        /// Stop after this many equipped nodes.
        #[arg(long)]
        equipped: Option<usize>,
    },
    /// Access bit-rate headroom over what each path's flows can use.
    TrapReport {
        /// Headroom above which a line counts as trapped.
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Service x path feasibility matrix.
    Feasibility {
        /// Dump the service catalog instead.
        #[arg(long)]
        catalog: bool,
    },
    /// Cache hit ratio over stored-fraction grid.
    HitRatio {
        /// Zipf exponent.
        #[arg(long, default_value_t = 0.8)]
        alpha: f64,
        /// Catalog size.
        #[arg(long, default_value_t = 10_000)]
        items: usize,
        /// Stored-fraction grid step.
        #[arg(long, default_value_t = 0.05)]
        step: f64,
        /// Hit ratio to mark.
        #[arg(long, default_value_t = 0.5)]
        target: f64,
    },
}

/// Runs a parsed command line and returns its output.
pub fn run(cli: &Cli) -> Result<Output> {
    let precision = cli.precision;
    let scenario = cli.scenario.as_deref();
    match &cli.command {
        Command::ThroughputTable {
            rtt,
            plr,
            mss,
            c,
            decimals,
        } => {
            let rtt_ms: &[f64] = if rtt.is_empty() { &DEFAULT_RTT_GRID_MS } else { rtt };
            let plr_pct: &[f64] = if plr.is_empty() { &DEFAULT_PLR_GRID_PCT } else { plr };
            commands::throughput_table_csv(
                &TableArgs {
                    rtt_ms,
                    plr_pct,
                    mss_bytes: *mss,
                    c: *c,
                    decimals: *decimals,
                },
                precision,
            )
        }
        Command::NsuCurve { equipped } => {
            let s = commands::load_scenario(scenario, "nsu-curve")?;
            commands::nsu_curve_csv(&s, *equipped, precision)
        }
        Command::TrapReport { threshold } => {
            let s = commands::load_scenario(scenario, "trap-report")?;
            commands::trap_report_csv(&s, *threshold, precision)
        }
        Command::Feasibility { catalog: true } => match scenario {
            Some(path) => {
                let s = scenario::Scenario::load(path)?;
                commands::catalog_csv(&s.catalog, Some(&s.hash))
            }
            None => commands::catalog_csv(&ubb_core::service::builtin_catalog(), None),
        },
        Command::Feasibility { catalog: false } => {
            let s = commands::load_scenario(scenario, "feasibility")?;
            commands::feasibility_csv(&s, precision)
        }
        Command::HitRatio {
            alpha,
            items,
            step,
            target,
        } => commands::hit_ratio_csv(
            &HitRatioArgs {
                alpha: *alpha,
                items: *items,
                step: *step,
                target: *target,
            },
            precision,
        ),
    }
}

/// Parses `args` (program name first) and runs them.
pub fn run_args<I, T>(args: I) -> Result<Output>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Validation(e.to_string()))?;
    run(&cli)
}
