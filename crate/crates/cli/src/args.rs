use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use swap_planarity::generate::DEFAULT_DELTA;
use swap_planarity::geom::DEFAULT_GRID_SIZE;
use swap_planarity::pointgen::DEFAULT_THRESHOLD;

#[derive(Debug, Parser)]
#[command(name = "swapplanar", version, about = "Generate, solve, verify and compare Swap Planarity instances")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a level with a verified minimum swap count.
    Gen(GenArgs),
    /// Find the minimum number of swaps to a plane drawing.
    Solve(SolveArgs),
    /// Check instance invariants; the exit code is the violation count.
    Verify(VerifyArgs),
    /// Test two instances for swap equivalence.
    Equiv(EquivArgs),
    /// Point generation experiments.
    #[command(subcommand)]
    Bench(BenchCommand),
    /// Emit hand-built instances or predicate test vectors.
    Fixtures(FixturesArgs),
    /// Serve the JSON API and the play client.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Number of vertices.
    #[arg(long)]
    pub n: usize,
    /// Edges to keep. Defaults to 2n-3 when neither this nor --removed is set.
    #[arg(long, conflicts_with = "removed")]
    pub m: Option<usize>,
    /// Edges to delete from the triangulation instead of fixing the total.
    #[arg(long)]
    pub removed: Option<usize>,
    /// Required minimum number of swaps.
    #[arg(long, default_value_t = 1)]
    pub swaps: u32,
    /// General-position separation in grid units.
    #[arg(long, conflicts_with = "delta_frac")]
    pub delta: Option<i64>,
    /// Separation as a fraction of the grid side.
    #[arg(long)]
    pub delta_frac: Option<f64>,
    /// Vertex disc radius; defaults to delta/3.
    #[arg(long)]
    pub rho: Option<i64>,
    /// Edge width; defaults to delta/4.
    #[arg(long)]
    pub lambda: Option<i64>,
    /// Random edge flips applied to the triangulation.
    #[arg(long, default_value_t = 0)]
    pub flips: usize,
    /// Seed; drawn at random and echoed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Failed point insertions tolerated before a restart.
    #[arg(long)]
    pub threshold: Option<u64>,
    #[arg(long)]
    pub max_restarts: Option<u32>,
    #[arg(long)]
    pub max_shuffle_rounds: Option<u32>,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    pub grid_size: u32,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub max_depth: u32,
    /// Include the minimal swap sequences.
    #[arg(long)]
    pub all: bool,
    /// Abort once this many states have been stored.
    #[arg(long)]
    pub max_states: Option<usize>,
    /// Keep at most this many sequences.
    #[arg(long)]
    pub solution_cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct EquivArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum BenchCommand {
    /// Attempts and restarts against the restart threshold.
    Thresholds(ThresholdArgs),
    /// Interior point count against delta.
    Hull(HullArgs),
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10usize])]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: i64,
    /// Thresholds to test; 50..500 in steps of 50 then up to --max-threshold
    /// in steps of 500 when omitted.
    #[arg(long, value_delimiter = ',')]
    pub thresholds: Vec<u64>,
    #[arg(long, default_value_t = 5000)]
    pub max_threshold: u64,
    #[arg(long, default_value_t = 100)]
    pub seeds: u64,
    #[arg(long, default_value_t = 1000)]
    pub max_restarts: u32,
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    /// Per-cell summary CSV.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Per-run CSV; standard output when omitted.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HullArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [10usize, 12])]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [200i64, 700, 1200, 1700, 2200])]
    pub delta: Vec<i64>,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    pub threshold: u64,
    #[arg(long)]
    pub max_restarts: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub base_seed: u64,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureName {
    EightCycle,
    BasicConstruction,
    /// Expected results of the integer orientation and crossing tests.
    PredicateVectors,
}

#[derive(Debug, Args)]
pub struct FixturesArgs {
    #[arg(long, value_enum)]
    pub name: FixtureName,
    /// Cases per predicate, for predicate-vectors.
    #[arg(long, default_value_t = 10_000)]
    pub count: usize,
    /// Seed for predicate-vectors.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: String,
    /// Cache directory for generated levels.
    #[arg(long)]
    pub levels: Option<PathBuf>,
    /// Directory holding the built play client.
    #[arg(long = "static")]
    pub static_dir: Option<PathBuf>,
}
