use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use routegames::dynamics::{PathChoice, PlayerOrder, DEFAULT_MAX_STEPS};
use routegames::equilibria::DEFAULT_ENUMERATE_CAP;
use routegames::CostModel;

mod commands;

#[derive(Parser)]
#[command(name = "routegames", version, about = "Bicriteria routing games: dynamics, equilibria and bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated instance file.
    Generate(GenerateArgs),
    /// Run best-response dynamics and write the step trace.
    Dynamics(DynamicsArgs),
    /// Enumerate all profiles and write the equilibrium report.
    Analyze(AnalyzeArgs),
    /// Check whether a routing is Nash and evaluate the bounds on it.
    Verify(VerifyArgs),
    /// Run the reproduction checks.
    #[command(name = "paper-suite")]
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Ring,
    NoNashSum,
    BucketTight,
    RandomGrid,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Ring size.
    #[arg(long)]
    n: Option<usize>,
    /// Bucket-tight path length.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long)]
    players: Option<usize>,
    #[arg(long)]
    strategies: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_parser = parse_model)]
    model: CostModel,
}

#[derive(Args)]
struct DynamicsArgs {
    #[command(flatten)]
    common: ModelArgs,
    #[arg(long, default_value = "round-robin", value_parser = parse_order)]
    order: PlayerOrder,
    #[arg(long, default_value = "best", value_parser = parse_choice)]
    choice: PathChoice,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_STEPS)]
    max_steps: usize,
    /// Start routing: `zero`, `random` (seeded) or a comma-separated list of strategy indices.
    #[arg(long, default_value = "zero")]
    start: String,
    /// Step trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: ModelArgs,
    #[arg(long, default_value_t = DEFAULT_ENUMERATE_CAP)]
    cap: u64,
    /// Worker threads; ROUTEGAMES_JOBS takes precedence.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Report file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a generation timestamp to the report.
    #[arg(long)]
    stamp: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: ModelArgs,
    /// Comma-separated strategy indices.
    #[arg(long)]
    routing: String,
    #[arg(long, default_value_t = DEFAULT_ENUMERATE_CAP)]
    cap: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    /// Only run checks whose name contains this string.
    #[arg(long)]
    filter: Option<String>,
}

fn parse_model(s: &str) -> Result<CostModel, String> {
    s.parse()
}

fn parse_order(s: &str) -> Result<PlayerOrder, String> {
    s.parse()
}

fn parse_choice(s: &str) -> Result<PathChoice, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Dynamics(a) => commands::dynamics(a),
        Command::Analyze(a) => commands::analyze(a),
        Command::Verify(a) => commands::verify(a),
        Command::Suite(a) => commands::suite(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
