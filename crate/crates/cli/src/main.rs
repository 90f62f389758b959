//! Command-line surface: family ingestion, existence analysis, FD and
//! confidence-limit extraction, multi-observation combination, composite
//! reports, figure-data reproduction and the Monte Carlo coverage harness.
//!
//! Outputs are flat CSV/JSON files; identical invocations produce
//! byte-identical files.

mod figures;
mod ops;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "fidgeo", version, about = "fiducial surface analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Family specification file (JSON).
    #[arg(long, global = true)]
    pub family: Option<PathBuf>,

    /// Grid: "auto" or "x=min:max:n,theta=min:max:n".
    #[arg(long, global = true, default_value = "auto")]
    pub grid: String,

    /// Nodes per axis for auto grids.
    #[arg(long, global = true, default_value_t = 1001)]
    pub nodes: usize,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,

    /// RNG seed (coverage).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Equal-value resolution, relative to section range.
    #[arg(long = "tol-mono", global = true, default_value_t = 1e-9)]
    pub tol_mono: f64,

    /// Absolute flatness band for plateau detection.
    #[arg(long = "tol-plateau", global = true, default_value_t = 1e-7)]
    pub tol_plateau: f64,

    /// Boundary band for the completeness check.
    #[arg(long = "tol-complete", global = true, default_value_t = 1e-3)]
    pub tol_complete: f64,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Existence verdict (exit 0: FD exists, exit 2: non-FD).
    Analyze,
    /// Fiducial distribution at an observation.
    Fd {
        #[arg(long)]
        x0: f64,
    },
    /// Confidence-limit set at an observation and level.
    Limits {
        #[arg(long)]
        x0: f64,
        #[arg(long)]
        beta: f64,
    },
    /// Combined fiducial density for several observations.
    Combine {
        /// Comma-separated observations, e.g. --obs 0.3,1.2
        #[arg(long, value_delimiter = ',', required = true)]
        obs: Vec<f64>,
    },
    /// Composite measure report at one observation of an |x| family.
    Composite {
        #[arg(long)]
        y: f64,
    },
    /// Figure-data bundles (built-in configurations).
    Figure {
        /// One of: 1, 2a, 2b, 4a, 4b, 5a, 5b
        #[arg(long)]
        id: String,
    },
    /// Coverage comparison of dual vs reciprocal one-sided limits.
    Coverage {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        trials: u64,
        #[arg(long = "true-phi")]
        true_phi: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match ops::run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
