// `!(x > 0.0)` is used on purpose: it rejects NaN along with the bad range.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use alphaflow_core::{Error, ErrorClass};

/// Euler and Euler-α vorticity solvers, contour dynamics and rate studies.
#[derive(Debug, Parser)]
#[command(name = "alphaflow", version)]
struct Cli {
    /// Print progress to stderr (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Pseudospectral Euler or Euler-α run on the periodic box.
    RunSpectral {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Contour-dynamics run of a vortex patch.
    RunContour {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Euler vs Euler-α difference norms over an α list, with slope fits.
    RateStudy {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-run one problem at refined resolution and report observed orders.
    SelfConvergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Ḃ^{1/2}_{2,∞} norm of a rasterized profile at several resolutions.
    BesovCheck {
        #[arg(long, value_delimiter = ',', default_value = "256,512,1024")]
        resolutions: Vec<usize>,
        #[arg(long, value_enum, default_value_t = Profile::Indicator)]
        profile: Profile,
        /// Disk radius for the indicator profile.
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Width of the Gaussian profile.
        #[arg(long, default_value_t = 0.5)]
        sigma: f64,
        /// Write `besov.csv` here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Table of K_order(z) on an evenly spaced grid.
    BesselTable {
        #[arg(long, default_value_t = 0)]
        order: u32,
        #[arg(long)]
        min: f64,
        #[arg(long)]
        max: f64,
        #[arg(long)]
        points: usize,
        /// Write `bessel_table.csv` here instead of printing it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Profile {
    Indicator,
    Gaussian,
}

fn exit_code(class: ErrorClass) -> u8 {
    match class {
        ErrorClass::Schema => 2,
        ErrorClass::Numerical => 3,
        ErrorClass::Io => 4,
    }
}

fn class_name(class: ErrorClass) -> &'static str {
    match class {
        ErrorClass::Schema => "schema",
        ErrorClass::Numerical => "numerical",
        ErrorClass::Io => "io",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let class = e.class();
            let code = exit_code(class);
            // one machine-parsable line: key=value pairs, message JSON-quoted
            eprintln!(
                "alphaflow-error class={} exit={} message={}",
                class_name(class),
                code,
                serde_json::Value::String(e.to_string())
            );
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    commands::init_workers()?;
    let v = cli.verbose;
    match cli.command {
        Command::RunSpectral { config, out } => commands::run_spectral(&config, &out, v),
        Command::RunContour { config, out } => commands::run_contour(&config, &out, v),
        Command::RateStudy { config, out } => commands::rate_study(&config, &out, v),
        Command::SelfConvergence { config, out } => commands::self_convergence(&config, &out, v),
        Command::BesovCheck {
            resolutions,
            profile,
            radius,
            sigma,
            out,
        } => {
            let profile = match profile {
                Profile::Indicator => alphaflow_core::harness::BesovProfile::Indicator { radius },
                Profile::Gaussian => alphaflow_core::harness::BesovProfile::Gaussian { sigma },
            };
            commands::besov_check(&resolutions, profile, out.as_deref())
        }
        Command::BesselTable {
            order,
            min,
            max,
            points,
            out,
        } => commands::bessel_table(order, min, max, points, out.as_deref()),
    }
}
