use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "instance-order",
    version,
    about = "Occlusion and depth order annotation toolkit"
)]
pub struct Cli {
    /// Worker threads for per-image work (default: all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check an annotation file and report depth cycles.
    Validate(ValidateArgs),
    /// Score predictions against ground truth.
    #[command(subcommand)]
    Eval(EvalCommand),
    /// Predict orders with a non-learned heuristic.
    Baseline(BaselineArgs),
    /// Evaluate an ordering loss.
    #[command(subcommand)]
    Loss(LossCommand),
    /// Dataset statistics and conditional tables.
    Stats(StatsArgs),
    /// Resolve vote streams, one whitespace-separated stream per line.
    Aggregate(AggregateArgs),
    /// Cap the number of instances per image.
    Subsample(SubsampleArgs),
    /// Generate a random annotation file.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    pub path: PathBuf,
    /// Treat the file as predictions (counts and overlap flags optional).
    #[arg(long)]
    pub predictions: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    WithBi,
    WithoutBi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CategoryArg {
    Distinct,
    Overlap,
    All,
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Occlusion recall / precision / F1.
    Occ {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, value_enum, default_value = "with-bi")]
        mode: ModeArg,
    },
    /// Weighted disagreement rate of instance depth orders.
    DepthOrder {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Categories to report (repeatable; default: all three).
        #[arg(long, value_enum)]
        category: Vec<CategoryArg>,
    },
    /// Dense depth-map errors between two PFM maps.
    Disparity {
        #[arg(long)]
        gt: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        /// Mask of valid pixels (default: pixels where gt is positive).
        #[arg(long)]
        valid: Option<PathBuf>,
        #[arg(long)]
        median_scale: bool,
    },
    /// Point-pair ordering against a disparity map.
    Points {
        #[arg(long)]
        disp: PathBuf,
        #[arg(long)]
        queries: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Area,
    Yaxis,
    DispMean,
    DispMedian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    Occlusion,
    Depth,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long, value_enum)]
    pub method: MethodArg,
    /// Annotation file whose pairs are predicted.
    #[arg(long)]
    pub annotations: PathBuf,
    /// Per-image rasters: `<dir>/<image_id>/disparity.pfm` and
    /// `<dir>/<image_id>/<instance_id>.pgm`.
    #[arg(long)]
    pub rasters: Option<PathBuf>,
    /// Order type to predict (disparity methods always predict depth).
    #[arg(long, value_enum)]
    pub target: Option<TargetArg>,
    #[arg(long, default_value_t = 0.05)]
    pub trim: f64,
    #[arg(long, default_value_t = 0.0)]
    pub eq_tol: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetArg {
    /// Depth orders only: {0, 1, 1, 0.1}.
    D,
    /// Occlusion and depth orders: {1, 1, 1, 0.1}.
    Od,
}

#[derive(Debug, Subcommand)]
pub enum LossCommand {
    /// Instance-wise disparity loss for one pair.
    Disp {
        #[arg(long)]
        disp: PathBuf,
        #[arg(long)]
        mask_a: PathBuf,
        #[arg(long)]
        mask_b: PathBuf,
        /// 1 when A is closer, -1 when A is farther.
        #[arg(long, allow_hyphen_values = true)]
        direction: i32,
    },
    /// Edge-aware smoothness.
    Smooth {
        #[arg(long)]
        disp: PathBuf,
        /// One gray plane or three colour planes (PGM).
        #[arg(long, num_args = 1..=3, required = true)]
        image: Vec<PathBuf>,
    },
    /// Weighted sum of the four loss terms.
    Combined {
        #[arg(long)]
        loo: f64,
        #[arg(long)]
        ldo: f64,
        #[arg(long)]
        ldisp: f64,
        #[arg(long)]
        ls: f64,
        #[arg(long, value_enum, conflicts_with = "weights")]
        preset: Option<PresetArg>,
        /// Explicit weights `l0,l1,l2,l3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<f64>>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Native,
    Released,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "native")]
    pub format: FormatArg,
    /// Released format only: read unlisted occlusion as "no occlusion".
    #[arg(long)]
    pub implied_none: bool,
}

#[derive(Debug, Args)]
pub struct AggregateArgs {
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct SubsampleArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = 10)]
    pub cap: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub images: usize,
    #[arg(long, default_value_t = 6)]
    pub max_instances: u32,
    #[arg(long)]
    pub seed: u64,
}
