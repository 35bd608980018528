use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use super::CliError;
use crate::transforms::{Interpolation, SampledFunction, Table};

/// Environment variable naming the directory that receives output files when
/// `--out` is not given.
pub const OUT_DIR_ENV: &str = "LEGENDRE_INDEX_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.extension())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `min:max:count[:log]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub const fn linear(min: f64, max: f64, count: usize) -> Self {
        GridSpec {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        }
    }

    pub const fn log(min: f64, max: f64, count: usize) -> Self {
        GridSpec {
            min,
            max,
            count,
            spacing: Spacing::Log,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let n = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == self.count - 1 {
                    return self.max;
                }
                let t = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(format!("grid `{s}` is not min:max:count[:log]"));
        }
        let num = |t: &str| {
            t.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("grid `{s}`: `{t}` is not a finite number"))
        };
        let (min, max) = (num(parts[0])?, num(parts[1])?);
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("grid `{s}`: `{}` is not a count", parts[2]))?;
        let spacing = match parts.get(3) {
            None => Spacing::Linear,
            Some(&"log") => Spacing::Log,
            Some(&"lin") | Some(&"linear") => Spacing::Linear,
            Some(other) => return Err(format!("grid `{s}`: unknown spacing `{other}`")),
        };
        if count == 0 {
            return Err(format!("grid `{s}` is empty"));
        }
        if max < min || (count > 1 && max == min) {
            return Err(format!("grid `{s}` needs min < max"));
        }
        if count == 1 && max != min {
            return Err(format!("grid `{s}` has one point but min ≠ max"));
        }
        if spacing == Spacing::Log && !(min > 0.0) {
            return Err(format!("log grid `{s}` needs min > 0"));
        }
        Ok(GridSpec {
            min,
            max,
            count,
            spacing,
        })
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.count)?;
        if self.spacing == Spacing::Log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for GridSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Flags shared by every subcommand. Each one may also be set in the
/// config file under the same name.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// Order μ of the Legendre functions (μ < 1/2).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Abscissa of the Mellin–Barnes line, or the weight exponent of the norm bounds.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Wedge opening angle β ∈ (0, 2π).
    #[arg(long)]
    pub beta: Option<f64>,
    /// x grid (r grid for the wedge), `min:max:count[:log]`.
    #[arg(long)]
    pub grid_x: Option<GridSpec>,
    /// τ grid, `min:max:count[:log]`.
    #[arg(long)]
    pub grid_tau: Option<GridSpec>,
    /// θ grid of the wedge, `min:max:count[:log]`.
    #[arg(long)]
    pub grid_theta: Option<GridSpec>,
    /// Builtin test function, e.g. `exp_decay(a=1)`.
    #[arg(long = "fn", conflicts_with = "fn_file")]
    #[serde(rename = "fn")]
    pub function: Option<String>,
    /// Two-column CSV (abscissa, value) of a tabulated function.
    #[arg(long)]
    pub fn_file: Option<PathBuf>,
    /// Pass/fail tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Half-height of the truncated Mellin–Barnes line.
    #[arg(long)]
    pub contour_height: Option<f64>,
    /// Initial node count on the Mellin–Barnes line.
    #[arg(long)]
    pub contour_nodes: Option<usize>,
    /// Regularisation ε of the G inversion; the limit form when absent.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Also check the norm bound of the forward transform.
    #[arg(long)]
    #[serde(default)]
    pub bound: bool,
    /// Output file; stdout when neither this nor the output directory variable is set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    /// Flags over the config file named by `--config`, if any.
    pub fn resolve(self) -> Result<Options, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file = load_config(&path)?;
        Ok(self.over(file))
    }

    fn over(self, base: Options) -> Options {
        // A function given on the command line, by name or by file,
        // replaces whichever form the config file used.
        let (function, fn_file) = if self.function.is_some() || self.fn_file.is_some() {
            (self.function, self.fn_file)
        } else {
            (base.function, base.fn_file)
        };
        Options {
            mu: self.mu.or(base.mu),
            nu: self.nu.or(base.nu),
            beta: self.beta.or(base.beta),
            grid_x: self.grid_x.or(base.grid_x),
            grid_tau: self.grid_tau.or(base.grid_tau),
            grid_theta: self.grid_theta.or(base.grid_theta),
            function,
            fn_file,
            tol: self.tol.or(base.tol),
            contour_height: self.contour_height.or(base.contour_height),
            contour_nodes: self.contour_nodes.or(base.contour_nodes),
            epsilon: self.epsilon.or(base.epsilon),
            bound: self.bound || base.bound,
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config,
        }
    }

    /// The input function, or `default` when none is given.
    pub fn function_or(&self, default: &str) -> Result<SampledFunction, CliError> {
        if let Some(path) = &self.fn_file {
            let table = Table::from_csv(path, Interpolation::Cubic)?;
            return Ok(SampledFunction::tabulated(table));
        }
        Ok(SampledFunction::parse(
            self.function.as_deref().unwrap_or(default),
        )?)
    }

    pub fn tol_or(&self, default: f64) -> Result<f64, CliError> {
        let tol = self.tol.unwrap_or(default);
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Config(format!(
                "tolerance must be positive, got {tol}"
            )));
        }
        Ok(tol)
    }

    /// Where the output goes: `--out`, else `<dir>/<stem>.<ext>` under the
    /// output directory variable, else stdout.
    pub fn destination(&self, stem: &str, format: Format) -> Option<PathBuf> {
        if let Some(out) = &self.out {
            return Some(out.clone());
        }
        std::env::var_os(OUT_DIR_ENV)
            .filter(|d| !d.is_empty())
            .map(|d| Path::new(&d).join(format!("{stem}.{}", format.extension())))
    }
}

pub fn load_config(path: &Path) -> Result<Options, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
