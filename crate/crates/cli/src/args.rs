use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand};
use facecap::capacity::AngleConvention;
use facecap::empirical::{DEFAULT_BINS, DEFAULT_PERCENTILE, DEFAULT_TILE};
use facecap::io::{EmbeddingFormat, ReportFormat};

/// Biometric capacity of face embedding sets.
#[derive(Debug, Parser)]
#[command(name = "facecap", version, about)]
pub struct Cli {
    /// More log output on stderr (repeat for debug detail).
    #[arg(long, action = ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Capacity curve of one embedding set.
    Estimate(EstimateArgs),
    /// Capacity curve per category of a label attribute.
    Subgroup(SubgroupArgs),
    /// Check the capacity formula against Monte Carlo cap fractions.
    McValidate(McArgs),
    /// Write a synthetic labelled embedding set of vMF identity clusters.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Embedding file (EMB1 binary or CSV).
    #[arg(long)]
    pub embeddings: PathBuf,

    /// auto, binary or csv.
    #[arg(long, default_value = "auto", value_parser = parse_embedding_format)]
    pub format: EmbeddingFormat,
}

#[derive(Debug, Args)]
#[group(id = "phi", required = true, multiple = false)]
pub struct PhiArgs {
    /// Identity threshold given as a cosine similarity.
    #[arg(long, allow_negative_numbers = true)]
    pub phi_cos: Option<f64>,

    /// Labels CSV with an identity column; φ is estimated per identity.
    #[arg(long)]
    pub phi_labels: Option<PathBuf>,

    /// Impostor score file; φ comes from the threshold at --far.
    #[arg(long, requires = "far")]
    pub phi_from_impostors: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub phi: PhiArgs,

    /// Percentile of each identity's genuine scores when using --phi-labels.
    #[arg(long, default_value_t = DEFAULT_PERCENTILE)]
    pub phi_percentile: f64,

    /// False acceptance rate for --phi-from-impostors.
    #[arg(long, requires = "phi_from_impostors")]
    pub far: Option<f64>,

    /// Threshold sweep over cos δ as lo:hi:steps (inclusive, linear).
    #[arg(long, allow_hyphen_values = true, group = "delta")]
    pub delta_grid: Option<String>,

    /// Explicit comma-separated cos δ values.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, group = "delta")]
    pub delta_cos: Vec<f64>,

    /// Percentile of all-pairs scores defining θ.
    #[arg(long, default_value_t = DEFAULT_PERCENTILE)]
    pub percentile: f64,

    #[arg(long, default_value = "half", value_parser = parse_convention)]
    pub theta_convention: AngleConvention,

    #[arg(long, default_value = "half", value_parser = parse_convention)]
    pub phi_convention: AngleConvention,

    #[arg(long, default_value = "full", value_parser = parse_convention)]
    pub delta_convention: AngleConvention,

    /// Dimension used in the capacity formula (defaults to the data's).
    #[arg(long)]
    pub dim: Option<u32>,

    /// Histogram bins over [-1, 1].
    #[arg(long, default_value_t = DEFAULT_BINS)]
    pub bins: usize,

    /// Row tile size of the pairwise computation.
    #[arg(long, default_value_t = DEFAULT_TILE)]
    pub tile: usize,

    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,

    /// Report file (default: stdout).
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// json or csv.
    #[arg(long, default_value = "json", value_parser = parse_report_format)]
    pub output_format: ReportFormat,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[command(flatten)]
    pub curve: CurveArgs,
}

#[derive(Debug, Args)]
pub struct SubgroupArgs {
    #[command(flatten)]
    pub input: InputArgs,

    /// Labels CSV carrying the attribute column.
    #[arg(long)]
    pub labels: PathBuf,

    /// Attribute column to split on.
    #[arg(long)]
    pub attribute: String,

    /// Categories with fewer rows are reported as skipped.
    #[arg(long, default_value_t = facecap::demographics::DEFAULT_MIN_GROUP_SIZE)]
    pub min_group_size: usize,

    #[command(flatten)]
    pub curve: CurveArgs,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long)]
    pub dim: usize,

    /// Population cap half-angle in radians.
    #[arg(long)]
    pub omega1: f64,

    /// Identity cap half-angle in radians.
    #[arg(long)]
    pub omega2: f64,

    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Acceptance band in standard errors.
    #[arg(long, default_value_t = 4.0)]
    pub sigmas: f64,

    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub identities: usize,

    #[arg(long)]
    pub per_identity: usize,

    /// vMF concentration of each identity cluster.
    #[arg(long)]
    pub kappa: f64,

    #[arg(long)]
    pub dim: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Adds a `group` attribute with this many categories.
    #[arg(long, default_value_t = 0)]
    pub groups: usize,

    #[arg(long)]
    pub out_embeddings: PathBuf,

    #[arg(long)]
    pub out_labels: PathBuf,

    #[arg(long)]
    pub threads: Option<usize>,
}

fn parse_convention(s: &str) -> Result<AngleConvention, String> {
    s.parse().map_err(|e: facecap::Error| e.to_string())
}

fn parse_embedding_format(s: &str) -> Result<EmbeddingFormat, String> {
    s.parse().map_err(|e: facecap::Error| e.to_string())
}

fn parse_report_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: facecap::Error| e.to_string())
}
