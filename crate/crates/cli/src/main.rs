//! `trustcalc`: trust assessment and evaluation from the command line.
//!
//! Results go to standard output as JSON; progress and summaries go to
//! standard error. Exit status is 0 on success, 1 on a usage error and 2 on a
//! data error.

mod commands;
mod error;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trustcalc::eval::Algorithm;
use trustcalc::EvidenceStyle;

pub const DEFAULT_LAMBDA: f64 = 30.0;
pub const DEFAULT_DEPTH: usize = 3;

#[derive(Parser, Debug)]
#[command(name = "trustcalc", version, about = "Three-valued subjective logic trust assessment")]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for experiments; TRUSTCALC_JOBS takes precedence.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Indirect trust between two users.
    Assess(AssessArgs),
    /// Turn a level edge list into an explicit-opinion edge list.
    Convert(ConvertArgs),
    /// Leave-one-edge-out prediction scored with F1.
    ExperimentF1(F1Args),
    /// Neighbour ranking scored with Kendall's tau.
    ExperimentRank(RankArgs),
    /// F1 experiment over a grid of lambda and base-level values.
    Sweep(SweepArgs),
    /// Node and edge counts of an edge list.
    Stats(StatsArgs),
    /// Write a random level edge list.
    Generate(GenerateArgs),
    /// F1 and ranking results of every algorithm side by side.
    Compare(CompareArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum StyleArg {
    /// Positive and negative evidence, no uncertainty (Advogato-like).
    #[value(alias = "pn")]
    Advogato,
    /// Positive and uncertain evidence, no negative evidence (PGP-like).
    #[value(alias = "pu")]
    Pgp,
}

impl From<StyleArg> for EvidenceStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Advogato => EvidenceStyle::PositiveNegative,
            StyleArg::Pgp => EvidenceStyle::PositiveUncertain,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgorithmArg {
    #[value(name = "3vsl", alias = "at")]
    ThreeVsl,
    #[value(name = "sl", alias = "slstar")]
    Sl,
    #[value(name = "tt", alias = "tidaltrust")]
    Tt,
    #[value(name = "et", alias = "eigentrust")]
    Et,
    #[value(name = "tr", alias = "trustrank")]
    Tr,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::ThreeVsl => Algorithm::AssessTrust,
            AlgorithmArg::Sl => Algorithm::SlStar,
            AlgorithmArg::Tt => Algorithm::TidalTrust,
            AlgorithmArg::Et => Algorithm::EigenTrust,
            AlgorithmArg::Tr => Algorithm::TrustRank,
        }
    }
}

/// Where the graph comes from and how levels become opinions.
#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Edge list: `src dst level` or `src dst alpha beta gamma [base_rate]`, tab separated.
    #[arg(long)]
    pub graph: PathBuf,

    /// How levels map to evidence; required for level edge lists.
    #[arg(long, value_enum)]
    pub style: Option<StyleArg>,

    /// Total evidence per edge.
    #[arg(long, default_value_t = DEFAULT_LAMBDA)]
    pub lambda: f64,

    /// Positive fraction of the lowest level [default: 0.3 advogato, 0.1 pgp].
    #[arg(long)]
    pub base_level: Option<f64>,

    /// Comma-separated level names, lowest first [default: per style].
    #[arg(long, value_delimiter = ',')]
    pub levels: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct AssessArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long = "from")]
    pub trustor: String,
    #[arg(long = "to")]
    pub trustee: String,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, value_enum, default_value = "3vsl")]
    pub algorithm: AlgorithmArg,
    /// Include the invocation log and parsing tree (3vsl only).
    #[arg(long)]
    pub trace: bool,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Destination of the explicit-opinion edge list.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct F1Args {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "3vsl")]
    pub algorithm: AlgorithmArg,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Number of edges left out and predicted.
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    /// Also write the report here instead of only to standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write prediction errors as CSV.
    #[arg(long)]
    pub errors_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "3vsl")]
    pub algorithm: AlgorithmArg,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    /// Number of users whose neighbours are ranked.
    #[arg(long = "seeds", default_value_t = 100)]
    pub ranking_seeds: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Write tau samples as CSV.
    #[arg(long)]
    pub tau_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "3vsl")]
    pub algorithm: AlgorithmArg,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
    pub lambdas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5")]
    pub base_levels: Vec<f64>,
    /// Directory receiving one JSON report per combination.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    #[arg(long, default_value_t = 500)]
    pub nodes: usize,
    #[arg(long, default_value_t = 8)]
    pub degree: usize,
    #[arg(long, value_enum, default_value = "advogato")]
    pub style: StyleArg,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long = "seeds", default_value_t = 100)]
    pub ranking_seeds: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e.inner());
            ExitCode::from(e.code())
        }
    }
}
