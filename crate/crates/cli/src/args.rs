//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::emit::Format;

#[derive(Debug, Parser)]
#[command(name = "ostrowski", version, about = "Error bounds for one-point weighted quadrature rules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weighted functional and its bounds at one or more points.
    Bounds(BoundsArgs),
    /// The Beta(1/2, 1/2), f(t) = t²/2 reference table with errata.
    Table1(Table1Args),
    /// Randomized battery over all inequalities.
    Verify(VerifyArgs),
    /// Knots of the least concave majorant of the modulus of continuity.
    Majorant(MajorantArgs),
    /// Unweighted functional with its closed-form bounds.
    Classical(ClassicalArgs),
    /// Known discrepancies with the published values.
    Erratum(OutputArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DomainArgs {
    /// `uniform`, `beta:<p>,<q>` or `normal:<mu>,<s>`.
    #[arg(long, default_value = "uniform")]
    pub weight: String,
    /// `a,b`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub interval: String,
    /// Absolute and relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// `poly:<c0>,<c1>,...` (ascending) or `witness`.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub function: String,
    /// Lower derivative bound for `witness`.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Upper derivative bound for `witness`.
    #[arg(long = "Gamma", allow_hyphen_values = true)]
    pub big_gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// A point, a comma list, `grid:<n>` or `sigma`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    /// Modulus grid for the majorant bound; 0 skips it.
    #[arg(long, default_value_t = 1025)]
    pub n_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassicalArgs {
    /// `a,b`.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub interval: String,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// A point, a comma list or `grid:<n>`.
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MajorantArgs {
    #[command(flatten)]
    pub domain: DomainArgs,
    /// `poly:<c0>,<c1>,...`, `witness` or `sin:<k>`.
    #[arg(long = "f", allow_hyphen_values = true)]
    pub function: String,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long = "Gamma", allow_hyphen_values = true)]
    pub big_gamma: Option<f64>,
    /// Starting grid; doubled until the curve settles.
    #[arg(long, default_value_t = 1025)]
    pub n_grid: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    /// Write errata here instead of after the table.
    #[arg(long)]
    pub errata_out: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Accepted margin below zero; negative values demand a positive margin.
    #[arg(long, default_value_t = 1e-8, allow_hyphen_values = true)]
    pub slack: f64,
    #[arg(long, default_value_t = 1025)]
    pub n_grid: usize,
    /// Run trials on one thread.
    #[arg(long)]
    pub serial: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}
