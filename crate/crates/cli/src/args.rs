//! Command-line grammar and the serializable run configuration.
//!
//! The clap tree is nested (`count mono`, `sample sweep`, ...). It is
//! flattened into [`Job`], which is what JSON output echoes and what
//! `--config` reads back.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use distgraph_core::experiments::default_grid;
use distgraph_core::RootFilter;
use serde::{Deserialize, Serialize};

#[derive(Parser, Debug)]
#[command(name = "distgraph", version, about = "Exact counts and simulations on random distance graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,

    /// Read the run configuration from a JSON file (a report's `config` object or a whole report)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write results here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Structure of the base graph
    Graph {
        #[command(subcommand)]
        op: GraphOp,
    },
    /// Pattern and network predicates
    Pattern {
        #[command(subcommand)]
        op: PatternOp,
    },
    /// Exact and analytic counts
    Count {
        #[command(subcommand)]
        op: CountOp,
    },
    /// Monte Carlo experiments on copy counts
    Sample {
        #[command(subcommand)]
        op: SampleOp,
    },
    /// Extension-property experiments
    Ext {
        #[command(subcommand)]
        op: ExtOp,
    },
    /// Spread of exact extension counts across admissible root tuples
    Uniformity(UniformityArgs),
    /// Exact monomorphism counts against M(k, l)
    Convergence(ConvergenceArgs),
    /// Fraction of admissible root tuples
    Tilde {
        #[command(subcommand)]
        op: TildeOp,
    },
}

#[derive(Subcommand, Debug)]
pub enum GraphOp {
    Info(GraphInfoArgs),
    /// Search for three vertices without a common neighbor
    Pathology(PathologyArgs),
}

#[derive(Subcommand, Debug)]
pub enum PatternOp {
    Analyze(AnalyzeArgs),
}

#[derive(Subcommand, Debug)]
pub enum CountOp {
    /// Monomorphisms of a pattern into the full graph
    Mono(MonoArgs),
    /// Extension counts for fixed root images
    Rooted(RootedArgs),
    /// M(k, l) and the threshold probabilities
    Analytic(AnalyticArgs),
}

#[derive(Subcommand, Debug)]
pub enum SampleOp {
    /// P(X_F > 0) over a grid of multiples of p*
    Sweep(SweepArgs),
    /// Quantiles of |X_F / E X_F - 1|
    Lln(LlnArgs),
    /// Law of X_F at the Poisson scaling
    Poisson(PoissonArgs),
}

#[derive(Subcommand, Debug)]
pub enum ExtOp {
    Sweep(ExtSweepArgs),
}

#[derive(Subcommand, Debug)]
pub enum TildeOp {
    Fraction(TildeArgs),
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphInfoArgs {
    #[arg(long)]
    pub n: u32,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathologyArgs {
    #[arg(long)]
    pub n: u32,
    /// Candidate triples to examine
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeArgs {
    /// Named fixture or pattern file
    #[arg(long)]
    pub pattern: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Blockprofile,
    Bruteforce,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonoArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = Method::Blockprofile)]
    pub method: Method,
    /// Count all homomorphisms instead of injective ones (block-profile only)
    #[arg(long)]
    pub non_injective: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootedArgs {
    #[arg(long)]
    pub network: String,
    #[arg(long)]
    pub n: u32,
    /// Root images as 0/1 strings, coordinate 1 first
    #[arg(long, value_delimiter = ',', conflicts_with = "blocks")]
    #[serde(default)]
    pub roots: Vec<String>,
    /// Block sizes of the root partition, 2^d entries
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub blocks: Vec<u32>,
    #[arg(long, value_enum, default_value_t = Method::Blockprofile)]
    pub method: Method,
    /// Require distinct images (brute force only)
    #[arg(long)]
    pub injective: bool,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalyticArgs {
    /// Named fixture or pattern file; networks also report the extension threshold
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub n: u32,
    /// Constant for the Poisson scaling
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub n: u32,
    /// Multipliers of p* (default: 9 log-spaced points from 0.1 to 10)
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub alphas: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LlnArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: f64,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoissonArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long)]
    pub n: u32,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Root filter flags shared by the extension commands.
#[derive(Args, Clone, Debug, PartialEq)]
pub struct FilterArgs {
    /// f(n) = floor(n^e)
    #[arg(long, value_name = "E", conflicts_with = "f_fixed")]
    pub f_exponent: Option<f64>,
    /// Constant f(n)
    #[arg(long, value_name = "F")]
    pub f_fixed: Option<u64>,
}

impl FilterArgs {
    pub fn resolve(&self) -> RootFilter {
        match (self.f_exponent, self.f_fixed) {
            (_, Some(f)) => RootFilter::Fixed(f),
            (Some(e), None) => RootFilter::Exponent(e),
            (None, None) => RootFilter::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleMode {
    Exhaustive,
    Sampled,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct ExtSweepArgs {
    #[arg(long)]
    pub network: String,
    #[arg(long)]
    pub n: u32,
    /// Multipliers of the sharp threshold (default: 9 log-spaced points from 0.1 to 10)
    #[arg(long, value_delimiter = ',')]
    pub multipliers: Vec<f64>,
    #[arg(long, default_value_t = 300)]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[arg(long, value_enum, default_value_t = TupleMode::Exhaustive)]
    pub mode: TupleMode,
    /// Root tuples per trial in sampled mode
    #[arg(long, default_value_t = 10_000)]
    pub tuples: u64,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct UniformityArgs {
    #[arg(long)]
    pub network: String,
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n_list: Vec<u32>,
    #[arg(long, default_value_t = 200)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub filter: FilterArgs,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceArgs {
    #[arg(long)]
    pub pattern: String,
    #[arg(long = "n", value_delimiter = ',', required = true)]
    pub n_list: Vec<u32>,
}

#[derive(Args, Clone, Debug, PartialEq)]
pub struct TildeArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub d: usize,
    /// Uniform samples when V^d is too large to enumerate
    #[arg(long, default_value_t = 20_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub filter: FilterArgs,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtSweepConfig {
    pub network: String,
    pub n: u32,
    pub multipliers: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub filter: RootFilter,
    pub mode: TupleMode,
    pub tuples: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniformityConfig {
    pub network: String,
    pub n_list: Vec<u32>,
    pub samples: u64,
    pub seed: u64,
    pub filter: RootFilter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TildeConfig {
    pub n: u32,
    pub d: usize,
    pub samples: u64,
    pub seed: u64,
    pub filter: RootFilter,
}

/// A fully resolved run: the echoed and re-readable configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Job {
    GraphInfo(GraphInfoArgs),
    GraphPathology(PathologyArgs),
    PatternAnalyze(AnalyzeArgs),
    CountMono(MonoArgs),
    CountRooted(RootedArgs),
    CountAnalytic(AnalyticArgs),
    SampleSweep(SweepArgs),
    SampleLln(LlnArgs),
    SamplePoisson(PoissonArgs),
    ExtSweep(ExtSweepConfig),
    Uniformity(UniformityConfig),
    Convergence(ConvergenceArgs),
    TildeFraction(TildeConfig),
}

impl From<Command> for Job {
    fn from(c: Command) -> Job {
        match c {
            Command::Graph { op: GraphOp::Info(a) } => Job::GraphInfo(a),
            Command::Graph { op: GraphOp::Pathology(a) } => Job::GraphPathology(a),
            Command::Pattern { op: PatternOp::Analyze(a) } => Job::PatternAnalyze(a),
            Command::Count { op: CountOp::Mono(a) } => Job::CountMono(a),
            Command::Count { op: CountOp::Rooted(a) } => Job::CountRooted(a),
            Command::Count { op: CountOp::Analytic(a) } => Job::CountAnalytic(a),
            Command::Sample { op: SampleOp::Sweep(mut a) } => {
                if a.alphas.is_empty() {
                    a.alphas = default_grid();
                }
                Job::SampleSweep(a)
            }
            Command::Sample { op: SampleOp::Lln(a) } => Job::SampleLln(a),
            Command::Sample { op: SampleOp::Poisson(a) } => Job::SamplePoisson(a),
            Command::Ext { op: ExtOp::Sweep(a) } => Job::ExtSweep(ExtSweepConfig {
                network: a.network,
                n: a.n,
                multipliers: if a.multipliers.is_empty() {
                    default_grid()
                } else {
                    a.multipliers
                },
                trials: a.trials,
                seed: a.seed,
                filter: a.filter.resolve(),
                mode: a.mode,
                tuples: a.tuples,
            }),
            Command::Uniformity(a) => Job::Uniformity(UniformityConfig {
                network: a.network,
                n_list: a.n_list,
                samples: a.samples,
                seed: a.seed,
                filter: a.filter.resolve(),
            }),
            Command::Convergence(a) => Job::Convergence(a),
            Command::Tilde { op: TildeOp::Fraction(a) } => Job::TildeFraction(TildeConfig {
                n: a.n,
                d: a.d,
                samples: a.samples,
                seed: a.seed,
                filter: a.filter.resolve(),
            }),
        }
    }
}

impl Job {
    /// Master seed of seeded commands.
    pub fn seed(&self) -> Option<u64> {
        match self {
            Job::GraphPathology(a) => Some(a.seed),
            Job::SampleSweep(a) => Some(a.seed),
            Job::SampleLln(a) => Some(a.seed),
            Job::SamplePoisson(a) => Some(a.seed),
            Job::ExtSweep(a) => Some(a.seed),
            Job::Uniformity(a) => Some(a.seed),
            Job::TildeFraction(a) => Some(a.seed),
            _ => None,
        }
    }

    /// Every coordinate count the job touches.
    pub fn n_values(&self) -> Vec<u32> {
        match self {
            Job::GraphInfo(a) => vec![a.n],
            Job::GraphPathology(a) => vec![a.n],
            Job::PatternAnalyze(_) => vec![],
            Job::CountMono(a) => vec![a.n],
            Job::CountRooted(a) => vec![a.n],
            Job::CountAnalytic(a) => vec![a.n],
            Job::SampleSweep(a) => vec![a.n],
            Job::SampleLln(a) => vec![a.n],
            Job::SamplePoisson(a) => vec![a.n],
            Job::ExtSweep(a) => vec![a.n],
            Job::Uniformity(a) => a.n_list.clone(),
            Job::Convergence(a) => a.n_list.clone(),
            Job::TildeFraction(a) => vec![a.n],
        }
    }
}
