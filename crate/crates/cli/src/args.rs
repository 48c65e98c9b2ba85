use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lso_core::Resolution;

#[derive(Parser, Debug)]
#[command(name = "lso", version, about = "Locality-sensitive orderings of the unit cube")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a family and write it in the binary family format.
    Build(BuildArgs),
    /// Check a locality or grid-ordering guarantee.
    Verify(VerifyArgs),
    /// Replay an update stream through the locality graph.
    Stream(StreamArgs),
    /// Replay a colored stream and report the closest red/blue pair after each op.
    Bcp(StreamArgs),
    /// Build the spanner on a point set and report its size and stretch.
    Spanner(SpannerArgs),
    /// Emit a packing of the unit sphere as points.
    PackSphere(PackSphereArgs),
    /// Emit grid orderings as lines of linear cell indices.
    GridOrders(GridOrdersArgs),
    /// Lower-bound instances and the spanner size table.
    Lowerbound(LowerboundArgs),
    /// Family sizes and update costs over a sweep of eps.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Classic,
    Gap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// `theorem`, `desk`, or a cap on λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Res(pub Resolution);

impl std::str::FromStr for Res {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "theorem" => Ok(Res(Resolution::Theorem)),
            "desk" => Ok(Res(Resolution::DeskScale)),
            _ => s
                .parse::<u32>()
                .map(|k| Res(Resolution::MaxLambda(k)))
                .map_err(|_| format!("expected theorem, desk or an integer, got {s:?}")),
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    #[arg(long, default_value_t = 0.25)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.125)]
    pub gamma: f64,
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Kind::Gap)]
    pub kind: Kind,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// theorem, desk, or a cap on λ
    #[arg(long, default_value = "theorem")]
    pub resolution: Res,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Classic,
    Gap,
    Grid,
    Gaporders,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    /// Family file (classic and gap modes).
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Point file (classic and gap modes).
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Defaults to the family's own eps.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Defaults to the family's own gamma.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Cells per axis (grid and gaporders modes).
    #[arg(long, default_value_t = 4)]
    pub t: usize,
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 1)]
    pub alpha: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StreamArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, default_value = "desk")]
    pub resolution: Res,
    /// Update stream file; without it a random stream is generated.
    #[arg(long)]
    pub ops: Option<PathBuf>,
    /// Length of the generated stream.
    #[arg(long, default_value_t = 1000)]
    pub random: usize,
    /// Most live points in the generated stream.
    #[arg(long, default_value_t = 300)]
    pub peak: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Compare against a from-scratch oracle every this many ops.
    #[arg(long)]
    pub check: Option<usize>,
    /// Include wall-clock times (reports are then not reproducible).
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SpannerArgs {
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value = "desk")]
    pub resolution: Res,
    /// Point file; without it `--n` uniform points are drawn.
    #[arg(long)]
    pub points: Option<PathBuf>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Compute the exact stretch and fail when it exceeds 1 + eps.
    #[arg(long)]
    pub check: bool,
    /// Write the edge list here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PackSphereArgs {
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    #[arg(long)]
    pub radius: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridKind {
    Walecki,
    Directional,
    Gap,
}

#[derive(Args, Debug)]
pub struct GridOrdersArgs {
    #[arg(long, value_enum, default_value_t = GridKind::Walecki)]
    pub kind: GridKind,
    #[arg(long)]
    pub t: usize,
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    #[arg(long)]
    pub alpha: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    Grid,
    Sphere,
    Spanner,
}

#[derive(Args, Debug)]
pub struct LowerboundArgs {
    #[arg(long, value_enum, default_value_t = BoundKind::Grid)]
    pub kind: BoundKind,
    /// One value, or a comma-separated list for the spanner table.
    #[arg(long, value_delimiter = ',', default_value = "0.125")]
    pub eps: Vec<f64>,
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    /// Point count for the spanner table's edge bound.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.125,0.0625")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 0.125)]
    pub gamma: f64,
    #[arg(long, visible_alias = "d", default_value_t = 2)]
    pub dim: usize,
    /// Resolution of the families whose updates are timed.
    #[arg(long, default_value = "desk")]
    pub resolution: Res,
    /// Points inserted before the timed updates.
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    /// Timed updates per row.
    #[arg(long, default_value_t = 200)]
    pub ops: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
