use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::CliError;

pub const GRID_ENV: &str = "RELUCALC_GRID_DEFAULT";
pub const GRID_DEFAULT: usize = 100_001;

#[derive(Parser, Debug)]
#[command(name = "relucalc", version, about = "Build, measure and encode ReLU network approximants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a network and write it in the relunet v1 text format.
    Build {
        constructor: String,
        #[command(flatten)]
        params: Params,
    },
    /// Build a network for every eps in --eps-list and tabulate its error and size.
    Sweep {
        constructor: String,
        #[command(flatten)]
        params: Params,
    },
    /// Quantize a network file, encode it and decode it again.
    Codec {
        file: PathBuf,
        #[command(flatten)]
        params: Params,
    },
    /// Count the linear regions of a one-dimensional network file.
    Regions {
        file: PathBuf,
        #[command(flatten)]
        params: Params,
    },
    /// Fewest affine pieces within each eps for a builtin function.
    Minpieces {
        function: String,
        #[command(flatten)]
        params: Params,
    },
}

/// Flags shared by all commands; each command reads the ones it needs.
#[derive(Args, Debug, Default, Clone)]
pub struct Params {
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Comma-separated list of tolerances.
    #[arg(long = "eps-list", value_delimiter = ',', allow_negative_numbers = true)]
    pub eps_list: Vec<f64>,
    /// Domain half-width.
    #[arg(long = "D", allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Input dimension (gaussian).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated polynomial coefficients, constant term first.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub coeffs: Vec<f64>,
    /// Interval `A,B` (regions, minpieces).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub interval: Vec<f64>,
    /// Grid points (per axis in one dimension; in total for lattices).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Params {
    pub fn grid(&self) -> Result<usize, CliError> {
        let n = match self.grid {
            Some(n) => n,
            None => match std::env::var(GRID_ENV) {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Usage(format!("{GRID_ENV} must be a positive integer, got `{v}`")))?,
                Err(_) => GRID_DEFAULT,
            },
        };
        if n < 2 {
            return Err(CliError::Usage(format!("the grid needs at least 2 points, got {n}")));
        }
        Ok(n)
    }

    pub fn interval(&self) -> Result<(f64, f64), CliError> {
        match self.interval.as_slice() {
            [] => Ok((0.0, 1.0)),
            &[a, b] if a < b => Ok((a, b)),
            other => Err(CliError::Usage(format!("--interval needs A,B with A < B, got {other:?}"))),
        }
    }

    pub fn eps_list(&self) -> Result<Vec<f64>, CliError> {
        let list = if self.eps_list.is_empty() { self.eps.into_iter().collect() } else { self.eps_list.clone() };
        if list.is_empty() {
            return Err(CliError::Usage("--eps-list is empty".into()));
        }
        if let Some(e) = list.iter().find(|&&e| !(e > 0.0 && e < 0.5)) {
            return Err(CliError::Usage(format!("every eps must lie in (0, 1/2), got {e}")));
        }
        Ok(list)
    }

    pub fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
        v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
    }
}
