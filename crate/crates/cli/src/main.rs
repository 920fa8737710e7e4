use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod grid;
mod manifest;

#[derive(Parser)]
#[command(
    name = "lda-shift",
    version,
    about = "Risk of linear discriminant analysis under label shift"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the limiting risk for one regime and print it as JSON.
    Theory(TheoryArgs),
    /// Monte Carlo sweep over gamma = p/n at a fixed sample size.
    SweepGamma(SweepGammaArgs),
    /// Monte Carlo sweep over the class ratio n1/n0 at fixed n0 and gamma0.
    SweepImbalance(SweepImbalanceArgs),
    /// Phase knots and, for a given gamma0, the shape of the imbalance curve.
    Phase(PhaseArgs),
    /// Run numerical self-checks.
    Check(CheckArgs),
    /// Re-run a sweep from its manifest.
    Rerun(RerunArgs),
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    gamma0: f64,
    #[arg(long)]
    gamma1: f64,
    #[arg(long)]
    delta2: f64,
    #[arg(long, default_value_t = 0.5)]
    pi0: f64,
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args, Clone)]
struct SweepCommon {
    #[arg(long)]
    delta2: f64,
    #[arg(long, default_value_t = 0.5)]
    pi0: f64,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value_t = 100)]
    reps: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Score each replication on a sampled test set of this size.
    #[arg(long)]
    test_size: Option<usize>,
    /// CSV output path. A manifest is written next to it.
    #[arg(long)]
    out: PathBuf,
    /// Also write the table as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct SweepGammaArgs {
    /// Total training samples.
    #[arg(long)]
    n: usize,
    /// Class ratio n1/n0.
    #[arg(long, default_value_t = 1.0)]
    ratio: f64,
    /// `start:stop:step` or a comma-separated list.
    #[arg(long)]
    grid: String,
    #[command(flatten)]
    common: SweepCommon,
}

#[derive(Args)]
struct SweepImbalanceArgs {
    #[arg(long)]
    n0: usize,
    #[arg(long)]
    gamma0: f64,
    /// `start:stop:step` or a comma-separated list of n1/n0 values.
    #[arg(long)]
    ratios: String,
    #[command(flatten)]
    common: SweepCommon,
}

#[derive(Args)]
struct PhaseArgs {
    #[arg(long)]
    delta2: f64,
    #[arg(long)]
    gamma0: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long, default_value = "1:10:0.25")]
    ratios: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Mp,
    Traces,
    Agreement,
    All,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    suite: Suite,
    /// Fewer replications with doubled tolerances.
    #[arg(long)]
    fast: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct RerunArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Write the CSV here instead of the recorded path.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Theory(a) => commands::theory(a),
        Command::SweepGamma(a) => commands::sweep_gamma(a),
        Command::SweepImbalance(a) => commands::sweep_imbalance(a),
        Command::Phase(a) => commands::phase(a),
        Command::Check(a) => commands::check(a),
        Command::Rerun(a) => commands::rerun(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
