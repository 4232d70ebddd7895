//! `nobody`: command-line front end for the polygon engine.

mod commands;
mod load;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "nobody",
    version,
    about = "Exact Newton–Okounkov polygons on surface lattice models"
)]
pub struct Cli {
    /// Model JSON file, or `fixture:NAME` for a shipped model
    /// (p2, dp7, tower7, p2-nodal-cubic, quadric-nodal).
    #[arg(long, global = true)]
    pub model: Option<String>,
    /// Write artifacts into this directory instead of printing them.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized classes and suites.
    #[arg(long, global = true, default_value_t = 2024)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the model invariants.
    Validate,
    /// Zariski decomposition of a class.
    Decompose {
        /// `[1,1,0]` or `2*E_p+F1+F2`.
        divisor: String,
    },
    /// Newton–Okounkov polygon of a big class for a flag.
    Body {
        divisor: String,
        /// `CURVE@generic` or `CURVE@{NAME:mult,...}`.
        flag: String,
    },
    /// rho_D, Null(P_D), mv and mv_null, plus bound verdicts when a flag is given.
    Invariants {
        divisor: String,
        #[arg(long)]
        flag: Option<String>,
    },
    /// mv(D) and mv_null(D).
    Mv { divisor: String },
    /// Blow up a point and print the new model.
    Blowup {
        /// Name of the exceptional curve.
        #[arg(long, default_value = "E")]
        name: String,
        /// `CURVE:mult` for each declared curve through the point.
        #[arg(long = "on")]
        on: Vec<String>,
    },
    /// Nodal tower over a declared curve, with reference values.
    Tower {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        k: usize,
        /// Class for the reference values; defaults to the ample witness.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Polygons over a universe of flags.
    Scan {
        divisor: String,
        /// Only flags on this curve.
        #[arg(long)]
        on: Option<String>,
        /// Also scan nodal towers over this curve.
        #[arg(long)]
        tower_curve: Option<String>,
        /// Tower heights `LO..HI` (inclusive); defaults to tower_min_k ..= tower_min_k + 10.
        #[arg(long)]
        k_range: Option<String>,
    },
    /// Run the acceptance suite, or verify model files.
    Verify {
        /// Verify every `*.json` model in this directory.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
