//! `tukey-gh`: fit, test, sample and simulate g-and-h models from the shell.
//!
//! Exit status: 0 on success, 1 on usage or I/O errors, 2 on numerical
//! failures (fits that fail or do not converge).

mod commands;
mod ingest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use tukey_gh::estimators::Method;
use tukey_gh::inference::NullSpec;

use crate::commands::Failure;

/// Environment variable that overrides `--seed` when set.
pub const SEED_ENV: &str = "GH_SEED";

#[derive(Debug, Parser)]
#[command(
    name = "tukey-gh",
    version,
    about = "Fit and test Tukey g-and-h models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate θ = (ξ, ω, g, h) from a column of data.
    Fit(FitArgs),
    /// Approximated likelihood ratio test of g = 0, h = 0 or both.
    Test(TestArgs),
    /// Draw a sample, one value per line.
    Sample(SampleArgs),
    /// Tabulate density, log-density and cdf on an even grid.
    Density(DensityArgs),
    /// Run a seeded Monte Carlo study.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Study {
    Recovery,
    Power,
    Timing,
    Boundary,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Delimited text file holding the data.
    #[arg(long)]
    pub input: PathBuf,
    /// Header name or 0-based index of the column to read.
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Half-width of the z-range covered by the knots.
    #[arg(long, default_value_t = 10.0)]
    pub bn: f64,
    /// Number of knots; defaults to max(1000, n).
    #[arg(long)]
    pub kn: Option<usize>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Destination file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub xi: f64,
    #[arg(long)]
    pub omega: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub g: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value = "male", value_parser = parse_method)]
    pub method: Method,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Null hypothesis: g, h or gh.
    #[arg(long, value_parser = parse_null)]
    pub null: NullSpec,
    #[arg(long, default_value_t = 0.05)]
    pub level: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub theta: ThetaArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub theta: ThetaArgs,
    /// Lower end of the y-grid; defaults to the 1e-5 quantile.
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// Upper end of the y-grid; defaults to the 1 - 1e-5 quantile.
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(value_enum)]
    pub study: Study,
    /// Sample sizes, comma separated.
    #[arg(long = "n", value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Replicates per cell: 200 recovery, 500 power, 10 timing, 300 boundary.
    #[arg(long)]
    pub replicates: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Estimators compared by the recovery study.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    pub methods: Option<Vec<Method>>,
    /// Null hypothesis for the power study.
    #[arg(long, value_parser = parse_null, default_value = "g")]
    pub null: NullSpec,
    /// Local alternative distances for the power study.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub d: Option<Vec<f64>>,
    /// Nominal levels for the power study.
    #[arg(long, value_delimiter = ',', default_value = "0.05")]
    pub level: Vec<f64>,
    /// Skewness values for the boundary study.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub g0: Option<Vec<f64>>,
    /// Size of the sample behind the theoretical standard errors.
    #[arg(long)]
    pub reference_size: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse::<Method>().map_err(|e| e.to_string())
}

fn parse_null(s: &str) -> Result<NullSpec, String> {
    s.parse::<NullSpec>().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { code, error }) => {
            eprintln!("error: {error:#}");
            ExitCode::from(code)
        }
    }
}
