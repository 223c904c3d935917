use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "reservoir-topo",
    version,
    about = "Topology of stochastic 3D reservoir models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw sequential Gaussian simulation realizations.
    Simulate(SimulateArgs),
    /// Betti numbers and Euler characteristic over a list of thresholds.
    Betti(BettiArgs),
    /// Persistence diagram of the excursion filtration.
    Persist(PersistArgs),
    /// Bottleneck distance between two diagrams or all diagrams in a directory.
    Bottleneck(BottleneckArgs),
    /// Weighted Betti numbers of several fields, for plotting.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariogramArg {
    Exp,
    Gauss,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Gslib,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KrigingArg {
    Ordinary,
    Simple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    GaussianCdf,
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L1,
    Linf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    /// Union-find for q = 0, matrix reduction otherwise.
    Auto,
    UnionFind,
    Matrix,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub nx: usize,
    #[arg(long)]
    pub ny: usize,
    #[arg(long)]
    pub nz: usize,
    #[arg(long, default_value_t = 1.0)]
    pub dx: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dy: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dz: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z0: f64,
    #[arg(long, value_enum)]
    pub variogram: VariogramArg,
    /// Variogram range in metres.
    #[arg(long, allow_hyphen_values = true)]
    pub range: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub sill: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean: f64,
    /// Repeat for several realizations; each gets its own file.
    #[arg(long = "seed", default_values_t = [0u64])]
    pub seeds: Vec<u64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Output format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// CSV of `kx,ky,kz,value` rows (1-based cell indices).
    #[arg(long)]
    pub conditioning: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    pub max_points: usize,
    /// Neighbour search radius in metres (default twice the range).
    #[arg(long)]
    pub search_radius: Option<f64>,
    #[arg(long, value_enum, default_value = "ordinary")]
    pub kriging: KrigingArg,
    #[arg(long, value_enum, default_value = "gaussian-cdf")]
    pub transform: TransformArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Alpha,
    ZValue,
    RawGl,
}

#[derive(Debug, Args)]
pub struct FieldInput {
    /// What the stored values are. Binary files carry no tag and default to
    /// alpha (raw GL when calibration values are given); GSLIB files name it
    /// on their third line.
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Calibration reading of clean reservoir, for raw GL fields.
    #[arg(long, allow_hyphen_values = true)]
    pub gl_min: Option<f64>,
    /// Calibration reading of clay, for raw GL fields.
    #[arg(long, allow_hyphen_values = true)]
    pub gl_max: Option<f64>,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Debug, Args)]
pub struct BettiArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// `start..end:step` or a comma-separated list.
    #[arg(long, default_value = "0.1..0.9:0.1")]
    pub alphas: String,
    /// CSV destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Measure volume in cubic metres instead of cells.
    #[arg(long)]
    pub physical_volume: bool,
    #[command(flatten)]
    pub field: FieldInput,
}

#[derive(Debug, Args)]
pub struct PersistArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Homology degree.
    #[arg(long, default_value_t = 0)]
    pub q: usize,
    /// Threshold spacing of the filtration.
    #[arg(long, default_value_t = 0.01)]
    pub step: f64,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    /// JSON destination; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub field: FieldInput,
}

#[derive(Debug, Args)]
pub struct BottleneckArgs {
    #[arg(long, requires = "b", conflicts_with = "matrix")]
    pub a: Option<PathBuf>,
    #[arg(long, requires = "a")]
    pub b: Option<PathBuf>,
    /// Directory of diagram JSON files; emits the all-pairs CSV.
    #[arg(long, required_unless_present = "a")]
    pub matrix: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "l1")]
    pub norm: NormArg,
    /// Matrix CSV destination; standard output when omitted.
    #[arg(long, requires = "matrix")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Field files; repeat for each.
    #[arg(long = "input")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, default_value = "0.01..0.99:0.01")]
    pub alphas: String,
    /// Scatter CSV destination.
    #[arg(long)]
    pub out: PathBuf,
    /// Summary JSON destination (default: next to the CSV).
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[arg(long)]
    pub physical_volume: bool,
    #[command(flatten)]
    pub field: FieldInput,
}
