//! `relshape`: node reliability polynomials from the command line.

mod commands;
mod config;
mod error;
mod input;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{AnalyzeArgs, CensusArgs, CoeffsArgs, PlotArgs, VerifyArgs};
use config::{Tolerance, DEFAULT_TOL, TOL_ENV};

#[derive(Debug, Parser)]
#[command(
    name = "relshape",
    version,
    about = "Shape of node reliability polynomials"
)]
struct Cli {
    /// Root isolation width, as a decimal or `a/b`.
    #[arg(long, global = true, env = TOL_ENV, default_value = DEFAULT_TOL, value_name = "TOL")]
    tol: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze one graph.
    Analyze(AnalyzeArgs),
    /// Shape statistics over all connected graphs of an order, or a graph6 file.
    Census(CensusArgs),
    /// Sample nRel or a derivative on [0, 1] as CSV.
    Plot(PlotArgs),
    /// Run the built-in correctness checks.
    Verify(VerifyArgs),
    /// Print the connected-set counts and derived coefficients.
    Coeffs(CoeffsArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Parsed here rather than by clap so that a bad RELSHAPE_TOL is ignored
    // when --tol is given.
    let tol = match cli.tol.parse::<Tolerance>() {
        Ok(t) => t.0,
        Err(e) => {
            eprintln!("error: invalid value for --tol: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a, &tol),
        Command::Census(a) => commands::census(a, &tol),
        Command::Plot(a) => commands::plot(a),
        Command::Verify(a) => commands::verify(a, &tol),
        Command::Coeffs(a) => commands::coeffs(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
