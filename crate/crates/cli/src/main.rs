//! `hap`: runs the reference experiments and exposes the library on user data.
//!
//! Every subcommand writes a fixed set of files under `--output-dir`. Reports
//! carry the full configuration and are byte-identical across runs with the
//! same flags; wall-clock time goes to a separate `timing.json`.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "hap", version, about = "Taylor-polynomial approximation in high arithmetic precision")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct Common {
    /// Mantissa width in bits.
    #[arg(long, global = true, env = "HAP_DEFAULT_BITS", default_value_t = 2000)]
    pub precision_bits: u32,
    /// Directory receiving the output files; created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,
    /// Seed for the random experiments.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Fit a polynomial to samples: coefficients.csv, fit.json.
    Fit(Source),
    /// Evaluate the fit at probe points: interp.csv.
    Interp(InterpArgs),
    /// Walk outward until the error crosses the threshold: extrap.csv, extrap.json.
    Extrap(ExtrapArgs),
    /// Derivatives of the fit: diff.csv.
    Diff(DiffArgs),
    /// Definite integral of the fit: integrate.json.
    Integrate(IntegrateArgs),
    /// Beam boundary-value problem: coefficients.csv, residual.json.
    OdeBeam(BeamArgs),
    /// Square slab under load: deflection.csv, shear.csv, equilibrium.json.
    PdePlate(PlateArgs),
    /// Identify b in b100 s + b010 s' + b001 s'' = 1: sysid.json.
    Sysid(SysidArgs),
    /// 2-D fit of random samples: coefficients.csv, fit2d.json.
    Fit2d(Fit2dArgs),
    /// Determinant, inverse and coefficient gaps per precision: table1.csv.
    Table1(TableArgs),
    /// Node and midpoint interpolation errors per precision: table2.csv.
    Table2(TableArgs),
    /// Integral of the fit over the domain per precision: table3.csv.
    Table3(TableArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Fit(_) => "fit",
            Command::Interp(_) => "interp",
            Command::Extrap(_) => "extrap",
            Command::Diff(_) => "diff",
            Command::Integrate(_) => "integrate",
            Command::OdeBeam(_) => "ode-beam",
            Command::PdePlate(_) => "pde-plate",
            Command::Sysid(_) => "sysid",
            Command::Fit2d(_) => "fit2d",
            Command::Table1(_) => "table1",
            Command::Table2(_) => "table2",
            Command::Table3(_) => "table3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Function {
    /// `sin(x)` on `[-L, L]`.
    Sin,
    /// `x²` on `[-L, L]`.
    T2,
}

/// Where the samples come from: a CSV file or a built-in function.
#[derive(Debug, Args, Serialize)]
pub struct Source {
    /// CSV with columns `x,f` (header optional).
    #[arg(long, conflicts_with = "function")]
    pub input: Option<PathBuf>,
    /// Built-in function sampled on `n` equispaced nodes of `[-L, L]`.
    #[arg(long, value_enum, required_unless_present = "input")]
    pub function: Option<Function>,
    #[arg(long, default_value_t = 201)]
    pub n: usize,
    /// Half-width `L` of the sampling domain.
    #[arg(long, default_value = "1")]
    pub length: String,
}

#[derive(Debug, Args, Serialize)]
pub struct InterpArgs {
    #[command(flatten)]
    pub source: Source,
    /// One-column CSV of probe points; defaults to the node midpoints.
    #[arg(long)]
    pub points: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ExtrapArgs {
    #[command(flatten)]
    pub source: Source,
    /// Error that ends the walk.
    #[arg(long, default_value = "1")]
    pub threshold: String,
    /// Farthest distance from the center that is probed.
    #[arg(long, default_value = "200")]
    pub cap: String,
}

#[derive(Debug, Args, Serialize)]
pub struct DiffArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Evaluation point (repeatable); defaults to the nodes.
    #[arg(long)]
    pub at: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct IntegrateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Defaults to the first node.
    #[arg(long, allow_hyphen_values = true)]
    pub lower: Option<String>,
    /// Defaults to the last node.
    #[arg(long, allow_hyphen_values = true)]
    pub upper: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct BeamArgs {
    /// Grid points on `[0, length]`, boundary points included.
    #[arg(long, default_value_t = 21)]
    pub n: usize,
    #[arg(long, default_value = "1")]
    pub length: String,
    #[arg(long, default_value = "1")]
    pub ei: String,
    /// Distributed load, `const:<q>`.
    #[arg(long, default_value = "const:0")]
    pub load: String,
    /// Boundary condition `<order>@<x>=<value>` (repeatable). Without any,
    /// the beam is clamped at both ends with `w(length) = 1`.
    #[arg(long = "bc")]
    pub bcs: Vec<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct PlateArgs {
    /// Grid nodes per side, edges included.
    #[arg(long, default_value_t = 20)]
    pub divisions: usize,
    /// Grid spacing.
    #[arg(long, default_value = "1/99")]
    pub dx: String,
    /// `uniform:<q>` or `point:<P>`.
    #[arg(long, default_value = "uniform:1")]
    pub load: String,
    /// Flexural rigidity `D`.
    #[arg(long, default_value = "1")]
    pub rigidity: String,
}

#[derive(Debug, Args, Serialize)]
pub struct SysidArgs {
    /// CSV with columns `t,s`; without it, `s = t²` is sampled on `[0, 1]`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Node count for the built-in `s = t²`.
    #[arg(long, default_value_t = hap_taylor::experiments::NEWTON_NODES)]
    pub n: usize,
    /// Reconstruction error that ends the extrapolation probe.
    #[arg(long, default_value = "1")]
    pub threshold: String,
}

#[derive(Debug, Args, Serialize)]
pub struct Fit2dArgs {
    /// CSV with columns `x,y,f`; without it, `sin(5x) + cos(e^{2y})` is
    /// sampled at `count` seeded points.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 300)]
    pub count: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct TableArgs {
    /// Comma-separated precisions in bits.
    #[arg(long, value_delimiter = ',', default_value = "50,500,1000,2000")]
    pub precisions: Vec<u32>,
    #[arg(long, default_value_t = hap_taylor::experiments::SIN_NODES)]
    pub n: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.common, &cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hap {}: {e:#}", cli.command.name());
            ExitCode::FAILURE
        }
    }
}
