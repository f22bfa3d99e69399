//! `hdbf`: k-sample mean tests for high-dimensional data with unequal
//! covariances, plus the simulation, power and ARE tooling around them.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hdbf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test equality of group means on a long-format CSV (`group,x1,...,xp`).
    Test(TestArgs),
    /// Run a Monte Carlo size/power campaign from a config file or preset.
    Simulate(SimulateArgs),
    /// Asymptotic power of both tests for a JSON population spec.
    Power(PowerArgs),
    /// ARE curve over lambda3 for the three-group setting, with its roots.
    Are(AreArgs),
    /// Bias of the two trace estimators on moving-average data.
    Bias(BiasArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write results here instead of standard output.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    T1,
    T2,
    Th,
    All,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[arg(long, short)]
    input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Campaign config file (`key = value` lines).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named table configuration, e.g. `table3:n10-10-80,theta0.005`.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct PowerArgs {
    /// JSON population spec.
    #[arg(long, short)]
    input: PathBuf,
    /// Overrides the spec's `alpha`.
    #[arg(long)]
    alpha: Option<f64>,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct AreArgs {
    /// Ratio of the second group's mean to the third's.
    #[arg(long, allow_negative_numbers = true)]
    tau: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Debug)]
struct BiasArgs {
    /// `table7:pP,nN`.
    #[arg(long, required_unless_present_all = ["p", "n1"])]
    preset: Option<String>,
    #[arg(long, conflicts_with = "preset")]
    p: Option<usize>,
    #[arg(long, conflicts_with = "preset")]
    n1: Option<usize>,
    /// `normal` or `chisq4`; presets fix their own.
    #[arg(long, conflicts_with = "preset")]
    innovation: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    out: OutputArgs,
}

fn configure_threads() -> Result<(), commands::CliError> {
    let Ok(raw) = std::env::var("HDBF_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        commands::CliError::Input(format!(
            "HDBF_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| commands::CliError::Internal(e.to_string()))
}

fn run(cli: Cli) -> Result<(), commands::CliError> {
    configure_threads()?;
    match cli.command {
        Command::Test(a) => {
            let out = commands::test(&a.input, a.method, a.alpha, a.out.format)?;
            output::emit(a.out.output.as_deref(), &out.text)?;
            out.failure.map_or(Ok(()), Err)
        }
        Command::Simulate(a) => {
            let source = match (&a.config, &a.preset) {
                (_, Some(p)) => commands::Source::Preset(p.clone()),
                (Some(c), None) => commands::Source::File(c.clone()),
                (None, None) => unreachable!("clap requires one of them"),
            };
            let overrides = commands::Overrides {
                reps: a.reps,
                seed: a.seed,
                alpha: a.alpha,
                method: a.method,
            };
            let text = commands::simulate(source, overrides, a.out.format)?;
            output::emit(a.out.output.as_deref(), &text)
        }
        Command::Power(a) => {
            let text = commands::power(&a.input, a.alpha, a.out.format)?;
            output::emit(a.out.output.as_deref(), &text)
        }
        Command::Are(a) => {
            let text = commands::are(a.tau, a.out.format)?;
            output::emit(a.out.output.as_deref(), &text)
        }
        Command::Bias(a) => {
            let source = match a.preset {
                Some(p) => commands::BiasSource::Preset(p),
                None => commands::BiasSource::Direct {
                    p: a.p.expect("clap enforces p"),
                    n1: a.n1.expect("clap enforces n1"),
                    innovation: a.innovation,
                },
            };
            let text = commands::bias(source, a.reps, a.seed, a.out.format)?;
            output::emit(a.out.output.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hdbf: {e}");
            ExitCode::from(e.code())
        }
    }
}
