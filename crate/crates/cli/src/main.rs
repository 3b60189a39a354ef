//! `wfgcpe` command-line front end.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Debug, Parser)]
#[command(
    name = "wfgcpe",
    version,
    about = "Weighted fractional generalized cumulative past entropy toolkit"
)]
struct Cli {
    /// Output format; pretty prints 6 significant digits, csv and json full precision.
    #[arg(long, value_enum, default_value = "pretty", global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a measure for a parametric model.
    Compute(ComputeArgs),
    /// Plug-in estimate from a data file or the builtin dataset.
    Estimate(EstimateArgs),
    /// Monte Carlo moments of the estimator against the exact formulas.
    Simulate(SimulateArgs),
    /// Regenerate one of the published tables.
    Reproduce(ReproduceArgs),
    /// Check every applicable inequality for a model.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DistKind {
    /// K(x) = (x/b)^c on (0, b).
    Power,
    /// K(x) = exp(-b x^-c) on (0, inf).
    Frechet,
    /// Uniform on (a, a+1).
    Uniform,
    /// K(x) = 1 - exp(-rate x^shape).
    Weibull,
}

#[derive(Debug, Args)]
struct DistArgs {
    #[arg(long, value_enum)]
    dist: DistKind,
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 2.0)]
    c: f64,
    /// Shift of the uniform model.
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    #[arg(long, default_value_t = 1.0)]
    rate: f64,
    #[arg(long, default_value_t = 1.0)]
    shape: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightKind {
    One,
    X,
    X2,
    Sqrtx,
    Expneg,
}

#[derive(Debug, Args)]
struct WeightArgs {
    #[arg(long, value_enum, default_value = "x")]
    weight: WeightKind,
    /// Piecewise-linear weight: one `x psi(x)` pair per line.
    #[arg(long, value_name = "FILE")]
    weight_custom: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Measure {
    Wfgcpe,
    Normalized,
    Residual,
    Dynamic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodChoice {
    /// Closed form when one applies, quadrature otherwise.
    Auto,
    Quadrature,
}

#[derive(Debug, Args)]
struct ComputeArgs {
    #[command(flatten)]
    dist: DistArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long, num_args = 1.., required = true)]
    gamma: Vec<f64>,
    #[arg(long, value_enum, default_value = "wfgcpe")]
    measure: Measure,
    /// Inspection time for the dynamic measure.
    #[arg(long)]
    t: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    method: MethodChoice,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReadingArg {
    Literal,
    Corrected,
}

#[derive(Debug, Args)]
struct EstimateArgs {
    /// Data file, or `blood_cancer_43` for the builtin dataset.
    #[arg(long)]
    input: String,
    /// Transcription of the builtin dataset.
    #[arg(long, value_enum, default_value = "corrected")]
    reading: ReadingArg,
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long, num_args = 1.., required = true)]
    gamma: Vec<f64>,
    /// Also write the loaded sample to this file.
    #[arg(long, value_name = "FILE")]
    export: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Population {
    /// K(x) = x^2 on (0, 1) with psi = x.
    PowerSquare,
    /// K(x) = 1 - exp(-theta x^2) with psi = x.
    Weibull,
    /// Uniform population with psi equal to its density.
    SelfWeight,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long, value_enum)]
    pop: Population,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value_t = 10_000)]
    replicates: usize,
    /// Derived from the clock and printed when absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    /// Run replicates on the calling thread only.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    table: u8,
    /// For table 3; both readings when absent.
    #[arg(long, value_enum)]
    reading: Option<ReadingArg>,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[command(flatten)]
    dist: DistArgs,
    #[command(flatten)]
    weight: WeightArgs,
    #[arg(long)]
    gamma: f64,
    /// Auxiliary weight for the power-weight bound; defaults to psi^(1/gamma).
    #[arg(long, value_enum)]
    xi: Option<WeightKind>,
}

#[derive(Debug)]
enum CliError {
    Core(wfgcpe::Error),
    Usage(String),
    Io(std::io::Error),
}

impl From<wfgcpe::Error> for CliError {
    fn from(e: wfgcpe::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use wfgcpe::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Core(e) => match e {
                E::Parse { .. }
                | E::Validation(_)
                | E::Io(_)
                | E::WeightAntiderivativeUnavailable(_) => 3,
                E::NonConvergence { .. } => 4,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Usage(m) => m.clone(),
            CliError::Io(e) => format!("i/o error: {e}"),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("WFGCPE_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        CliError::Usage(format!(
            "WFGCPE_THREADS must be a positive integer, got '{raw}'"
        ))
    })?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: Cli) -> Result<report::ReportDocument, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Compute(a) => commands::compute(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Reproduce(a) => commands::reproduce(a),
        Command::Bounds(a) => commands::bounds(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let format = cli.format;
    match run(cli) {
        Ok(doc) => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            if let Err(e) = doc.write(format, &mut lock).and_then(|_| lock.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(3);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
