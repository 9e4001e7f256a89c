//! `fqg`: Hopf images, generation certificates, generated subgroups and
//! intertwiner spaces of finite quantum groups described in JSON files.

mod commands;
mod input;
mod output;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Exit codes: 0 success, 1 computation or axiom failure, 2 unreadable
/// input, 3 morphism not generating.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Failure(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fqg", version, about = "Hopf images and generated subgroups of finite quantum groups")]
pub struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Threshold for every numerical rank and residual decision.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed for randomized sampling (condition (iv), random coreps).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verify the Hopf *-algebra and Haar axioms of a quantum group.
    Check { spec: PathBuf },
    /// Solve for the Haar state from the structure constants.
    Haar { spec: PathBuf },
    /// Compute the Hopf image of a morphism.
    HopfImage { spec: PathBuf, morphism: PathBuf },
    /// Decide whether a morphism is generating (exit 3 if not).
    IsGenerating {
        spec: PathBuf,
        morphism: PathBuf,
        /// Number of random corep pairs sampled for condition (iv).
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// The quantum subgroup generated by a family of subgroups.
    ///
    /// Each subgroup is a JSON file, a codouble leg (`K` or `Khat`), or a
    /// comma-separated list of generating elements such as `(12),(123)`.
    GeneratedSubgroup {
        spec: PathBuf,
        #[arg(required = true)]
        subgroups: Vec<String>,
    },
    /// Intertwiners between two coreps (`regular`, `trivial` or a JSON file),
    /// optionally compared with those of restrictions to subgroups.
    Intertwiners {
        spec: PathBuf,
        u: String,
        v: String,
        /// Subgroup to restrict to; repeat for a family.
        #[arg(long = "restrict")]
        restrict: Vec<String>,
    },
    /// Summary of a quantum group, and of a morphism out of it if given.
    Report { spec: PathBuf, morphism: Option<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(cli.tolerance > 0.0 && cli.tolerance.is_finite()) {
        eprintln!("input error: --tolerance must be a positive number");
        return ExitCode::from(2);
    }
    fqg_core::linalg::set_tolerance(cli.tolerance);
    match commands::run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable report"));
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
