//! Command-line front end: single-point QFI, loss sweeps, thresholds,
//! quantum-advantage curves and the input-composition search.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "squeezed-qfi", version, about = "Phase-estimation bounds for squeezed light through a parametric amplifier")]
pub struct Cli {
    /// Output format (default: plain for point results, csv for sweeps)
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overwrite an existing --out file
    #[arg(long, global = true)]
    pub force: bool,
    /// Reserved; nothing here is random, so the flag is rejected
    #[arg(long, global = true)]
    pub seedless: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PointScheme {
    /// Squeezed vacuum in both modes (alpha must be 0)
    SvacPair,
    /// Displaced squeezed vacuum in both modes
    DsvPair,
    /// Coherent state in mode a, squeezed vacuum in mode b
    CoherentSqueezed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    General,
    Closed,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Quantum Fisher information at one parameter point
    Qfi {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        g: f64,
        /// Displacement magnitude; coherent-squeezed defaults to sinh(r)
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[arg(long, default_value_t = 0.0)]
        loss: f64,
        #[arg(long, value_enum, default_value = "svac-pair")]
        scheme: PointScheme,
        #[arg(long, value_enum, default_value = "general")]
        method: Method,
    },
    /// QFI against loss rate, with fixed SNL and HL reference columns
    Scan {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 0.0)]
        l_min: f64,
        #[arg(long, default_value_t = 1.0)]
        l_max: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long, default_value = "svac-pair")]
        scheme: String,
        /// Append the quantum-advantage column a_q
        #[arg(long)]
        compare: bool,
    },
    /// Loss rate at which the QFI falls to the shot-noise limit
    Threshold {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value = "svac-pair")]
        scheme: String,
    },
    /// Quantum advantage over the coherent-squeezed scheme against loss rate
    Advantage {
        #[arg(long)]
        r: f64,
        #[arg(long)]
        g: f64,
        #[arg(long, default_value_t = 0.0)]
        l_min: f64,
        #[arg(long, default_value_t = 0.99)]
        l_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Best displacement/squeezing split at fixed input photon number
    Optimize {
        #[arg(long, default_value_t = 2.0)]
        g: f64,
        /// Input photon number; default 2 sinh^2(2)
        #[arg(long)]
        n_in: Option<f64>,
        #[arg(long, default_value_t = 50)]
        grid: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
