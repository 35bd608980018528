//! Command-line front end.
//!
//! Every subcommand writes one table (CSV with a single header row, or JSON
//! `{meta, data, summary}`) and exits with
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every check passed |
//! | 1 | a tolerance was breached |
//! | 2 | invalid configuration |
//! | 3 | numerical failure |

mod commands;
pub mod config;
pub mod output;
mod verify;

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{Format, GridSpec, Options, Spacing, OUT_DIR_ENV};
pub use output::{fmt_float, Cell, Record, Report};

use crate::error::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("numerical failure: {0}")]
    Numerical(Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(m) | Error::Capability(m) => CliError::Config(m),
            other => CliError::Numerical(other),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    ToleranceBreach = 1,
    ConfigError = 2,
    NumericalFailure = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_pass(pass: bool) -> Self {
        if pass {
            ExitStatus::Pass
        } else {
            ExitStatus::ToleranceBreach
        }
    }

    fn label(self) -> &'static str {
        match self {
            ExitStatus::Pass => "pass",
            ExitStatus::ToleranceBreach => "tolerance_breach",
            ExitStatus::ConfigError => "config_error",
            ExitStatus::NumericalFailure => "numerical_failure",
        }
    }
}

impl From<&CliError> for ExitStatus {
    fn from(e: &CliError) -> Self {
        match e {
            CliError::Config(_) => ExitStatus::ConfigError,
            // Output that cannot be written is a configuration problem.
            CliError::Io(_) => ExitStatus::ConfigError,
            CliError::Numerical(_) => ExitStatus::NumericalFailure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    F,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ode,
    Identities,
    Bounds,
    Wedge,
}

#[derive(Debug, Parser)]
#[command(
    name = "legendre-index",
    version,
    about = "Index transforms with a product of associated Legendre functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Φ(x, τ) by the direct, Mellin–Barnes and Fourier-cosine routes.
    Kernel(#[command(flatten)] Options),
    /// The forward transform F (over τ) or G (over x).
    Forward {
        #[arg(value_enum, ignore_case = true)]
        direction: Direction,
        #[command(flatten)]
        options: Options,
    },
    /// Forward transform followed by the inversion formula, compared with the input.
    Roundtrip {
        #[arg(value_enum, ignore_case = true)]
        direction: Direction,
        #[command(flatten)]
        options: Options,
    },
    /// A verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        options: Options,
    },
    /// The wedge boundary value problem on an (r, θ) grid.
    Wedge(#[command(flatten)] Options),
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitStatus::ConfigError.code()
            } else {
                0
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(status) => status.code(),
        Err(e) => {
            let status = ExitStatus::from(&e);
            eprintln!("error: {e}");
            status.code()
        }
    }
}

pub fn execute(command: Command) -> Result<ExitStatus, CliError> {
    let (stem, default_format, options) = match &command {
        Command::Kernel(o) => ("kernel".to_string(), Format::Csv, o),
        Command::Forward { direction, options } => (
            format!("forward-{}", dir_name(*direction)),
            Format::Csv,
            options,
        ),
        Command::Roundtrip { direction, options } => (
            format!("roundtrip-{}", dir_name(*direction)),
            Format::Json,
            options,
        ),
        Command::Verify { suite, options } => (
            format!("verify-{}", suite_name(*suite)),
            Format::Json,
            options,
        ),
        Command::Wedge(o) => ("wedge".to_string(), Format::Csv, o),
    };
    let options = options.clone().resolve()?;
    let format = options.format.unwrap_or(default_format);
    let (mut report, status) = match command {
        Command::Kernel(_) => commands::kernel(&options)?,
        Command::Forward { direction, .. } => commands::forward(&options, direction)?,
        Command::Roundtrip { direction, .. } => commands::roundtrip(&options, direction)?,
        Command::Verify { suite, .. } => verify::run(&options, suite)?,
        Command::Wedge(_) => commands::wedge(&options)?,
    };
    report.summary = std::mem::take(&mut report.summary).text("status", status.label());
    report.emit(format, options.destination(&stem, format).as_deref())?;
    log::info!("{stem}: {}", status.label());
    Ok(status)
}

fn dir_name(d: Direction) -> &'static str {
    match d {
        Direction::F => "f",
        Direction::G => "g",
    }
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Ode => "ode",
        Suite::Identities => "identities",
        Suite::Bounds => "bounds",
        Suite::Wedge => "wedge",
    }
}
