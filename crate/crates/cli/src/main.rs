//! `rbm-decoder`: generate datasets, train networks and benchmark decoders.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "rbm-decoder", version, about = "Neural and matching decoders for the toric code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a dataset of error chains and their syndromes.
    Gen(GenArgs),
    /// Train one network on a dataset.
    Train(TrainArgs),
    /// Train one network per grid point and keep the best on a validation set.
    Grid(GridArgs),
    /// Estimate the logical failure rate of one decoder.
    Eval(EvalArgs),
    /// Failure rates of several decoders over a sweep of error probabilities.
    Compare(CompareArgs),
    /// Homology-class histogram of the neural decoder.
    Hist(HistArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long = "L")]
    size: usize,
    #[arg(long = "p")]
    p_err: f64,
    #[arg(long = "M")]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

/// Flags that override keys of the `hyper` config section.
#[derive(Debug, Clone, Default, Args)]
struct HyperOverrides {
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    batch_size: Option<usize>,
    #[arg(long)]
    init_width: Option<f64>,
    #[arg(long)]
    cd_k: Option<usize>,
    #[arg(long)]
    l2: Option<f64>,
    #[arg(long)]
    n_h: Option<usize>,
    #[arg(long)]
    epochs: Option<usize>,
    #[arg(long)]
    n_eq: Option<usize>,
}

#[derive(Debug, Args)]
struct TrainArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Per-epoch log, appended to if it exists.
    #[arg(long)]
    log: Option<PathBuf>,
    #[command(flatten)]
    hyper: HyperOverrides,
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// One row per grid point with its validation score.
    #[arg(long)]
    report: PathBuf,
    #[arg(long)]
    validation_size: Option<usize>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    /// Epoch count applied to every grid point.
    #[arg(long)]
    epochs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecoderArg {
    Neural,
    Mwpm,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long, value_enum)]
    decoder: DecoderArg,
    #[arg(long)]
    model: Option<PathBuf>,
    #[command(flatten)]
    test: TestSetArgs,
}

#[derive(Debug, Args)]
struct HistArgs {
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    test: TestSetArgs,
}

#[derive(Debug, Args)]
struct TestSetArgs {
    #[arg(long = "L")]
    size: usize,
    #[arg(long = "p")]
    p_err: f64,
    #[arg(long = "M", default_value_t = 10_000)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = rbm_decoder::decoders::DEFAULT_N_EQ)]
    n_eq: usize,
    #[arg(long, default_value_t = rbm_decoder::decoders::DEFAULT_MAX_SWEEPS)]
    max_sweeps: usize,
}

#[derive(Debug, Args)]
struct CompareArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long = "M")]
    count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_sweeps: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
