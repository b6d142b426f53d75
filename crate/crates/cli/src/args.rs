use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ginlab::config::{Dim, OutputFormat, RunConfig, VariantName};
use ginlab::ensembles::SymmetryClass;

#[derive(Debug, Parser)]
#[command(name = "ginlab", version, about = "Exact and sampled eigenvalue statistics of Ginibre-type ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample matrices and write their eigenvalues as CSV.
    Sample {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate an exact curve on a grid.
    Exact {
        #[arg(value_enum)]
        curve: Curve,
        #[command(flatten)]
        common: Common,
    },
    /// Compare Monte Carlo estimates with exact values.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Curve {
    Density,
    RealDensity,
    Edge,
    Gap,
    Nn,
    WeakDensity,
    KernelSlice,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SuiteArg {
    Density,
    RealCount,
    Pair,
    Gap,
    All,
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON file with the same keys as the long flags; flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// complex, real or quaternion
    #[arg(long, value_parser = parse_class)]
    pub class: Option<SymmetryClass>,
    /// circular, elliptic or truncated
    #[arg(long, value_parser = parse_variant)]
    pub variant: Option<VariantName>,
    /// Matrix size, or `inf` for the gap and nn curves.
    #[arg(long, value_parser = parse_dim)]
    pub dim: Option<Dim>,
    #[arg(long, allow_hyphen_values = true)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub trunc_m: Option<usize>,
    #[arg(long)]
    pub trunc_l: Option<usize>,
    /// Falls back to $GINLAB_SEED, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    /// csv or json
    #[arg(long, value_parser = parse_format)]
    pub format: Option<OutputFormat>,
    /// Lower end of the abscissa grid.
    #[arg(long, allow_hyphen_values = true)]
    pub grid_min: Option<f64>,
    /// Upper end of the abscissa grid (s for gap curves).
    #[arg(long, allow_hyphen_values = true)]
    pub s_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
    /// Imaginary part of the points for density and kernel_slice.
    #[arg(long, allow_hyphen_values = true)]
    pub im: Option<f64>,
    /// Weak non-Hermiticity control parameter.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub z_threshold: Option<f64>,
}

impl Common {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            class: self.class,
            variant: self.variant,
            dim: self.dim,
            tau: self.tau,
            trunc_m: self.trunc_m,
            trunc_l: self.trunc_l,
            seed: self.seed,
            samples: self.samples,
            workers: self.workers,
            out: self.out.clone(),
            format: self.format,
            grid_min: self.grid_min,
            s_max: self.s_max,
            step: self.step,
            im: self.im,
            a: self.a,
            z_threshold: self.z_threshold,
        }
    }
}

fn parse_class(s: &str) -> Result<SymmetryClass, String> {
    s.parse().map_err(|e: ginlab::Error| e.to_string())
}

fn parse_variant(s: &str) -> Result<VariantName, String> {
    s.parse().map_err(|e: ginlab::Error| e.to_string())
}

fn parse_dim(s: &str) -> Result<Dim, String> {
    s.parse().map_err(|e: ginlab::Error| e.to_string())
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse().map_err(|e: ginlab::Error| e.to_string())
}
