//! The `cliffmech` command line: `verify`, `derive`, `simulate` and `table`.
//!
//! Exit codes are listed in [`error::exit`].

pub mod commands;
pub mod config;
pub mod error;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use cliffmech_core::{GradientMode, Method};

use crate::config::{parse_vector, Command, Format, RunConfig};
use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "cliffmech", version, about = "Hamiltonian mechanics on flat almost Clifford manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,

    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true, env = "CLIFFMECH_CONFIG")]
    config: Option<PathBuf>,

    /// Coordinates per block; the manifold has dimension 8n.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Structure index k in 1..=6.
    #[arg(long, global = true)]
    structure: Option<usize>,

    /// Hamiltonian over x0..x{8n-1}, e.g. "0.5*(x0^2+x1^2)".
    #[arg(long, global = true, allow_hyphen_values = true)]
    ham: Option<String>,

    /// Initial point, comma separated.
    #[arg(long, global = true, allow_hyphen_values = true)]
    x0: Option<String>,

    #[arg(long, global = true)]
    dt: Option<f64>,

    #[arg(long, global = true)]
    steps: Option<usize>,

    /// rk4 or midpoint.
    #[arg(long, global = true, value_parser = parse_method)]
    method: Option<Method>,

    /// Midpoint fixed-point tolerance, relative to max(1, |x|).
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    #[arg(long, global = true)]
    max_iterations: Option<usize>,

    /// symbolic or finite-difference.
    #[arg(long, global = true, value_parser = parse_gradient)]
    gradient: Option<GradientMode>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Diagnostics JSON file for `simulate`.
    #[arg(long, global = true)]
    diagnostics: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Cmd {
    /// Check every structure identity for all six structures.
    Verify,
    /// Print the Liouville form, symplectic form and Hamilton equations of one structure.
    Derive,
    /// Integrate Hamilton's equations and write a trajectory.
    Simulate,
    /// Pairwise products and anticommutators of the six structures.
    Table,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Verify => Command::Verify,
            Cmd::Derive => Command::Derive,
            Cmd::Simulate => Command::Simulate,
            Cmd::Table => Command::Table,
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse()
}

fn parse_gradient(s: &str) -> Result<GradientMode, String> {
    match s {
        "symbolic" => Ok(GradientMode::Symbolic),
        "finite-difference" | "fd" => Ok(GradientMode::FiniteDifference),
        other => Err(format!("unknown gradient mode '{other}' (expected symbolic or finite-difference)")),
    }
}

impl Cli {
    fn into_config(self) -> Result<RunConfig, CliError> {
        let file = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            command: self.command.map(Command::from),
            n: self.n,
            structure: self.structure,
            ham: self.ham,
            x0: self.x0.as_deref().map(parse_vector).transpose().map_err(|e| CliError::Usage(format!("--x0: {e}")))?,
            dt: self.dt,
            steps: self.steps,
            method: self.method,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            gradient: self.gradient,
            output: self.output,
            diagnostics: self.diagnostics,
            format: self.format,
        };
        Ok(flags.over(file))
    }
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    match cli.into_config().and_then(|cfg| commands::dispatch(&cfg)) {
        Ok(()) => error::exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}
