use std::path::PathBuf;

use facecap::io::{EmbeddingFormat, ReportFormat};
use facecap::{Conventions, HistogramConfig};

use crate::args::{CurveArgs, InputArgs, RunArgs};
use crate::error::{CliError, Result};

/// Where the identity angle φ comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSource {
    /// A fixed cosine threshold.
    Fixed(f64),
    /// Median over identities of a per-identity percentile.
    Conditional { labels: PathBuf, percentile: f64 },
    /// Threshold at a false acceptance rate over impostor scores.
    Impostors { scores: PathBuf, far: f64 },
}

impl PhiSource {
    pub fn describe(&self) -> String {
        match self {
            PhiSource::Fixed(_) => "fixed".into(),
            PhiSource::Conditional { percentile, .. } => format!("conditional:{percentile}"),
            PhiSource::Impostors { far, .. } => format!("far:{far}"),
        }
    }
}

/// Validated settings of a curve-producing run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub embeddings: PathBuf,
    pub format: EmbeddingFormat,
    pub phi: PhiSource,
    pub percentile: f64,
    pub delta_cosines: Vec<f64>,
    pub conventions: Conventions,
    pub dim: Option<u32>,
    pub histogram: HistogramConfig,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    pub output_format: ReportFormat,
}

fn check_percentile(name: &str, p: f64) -> Result<()> {
    if p > 0.0 && p <= 100.0 {
        Ok(())
    } else {
        Err(CliError::usage(format!("--{name} must lie in (0, 100], got {p}")))
    }
}

pub fn check_threads(threads: Option<usize>) -> Result<()> {
    match threads {
        Some(0) => Err(CliError::usage("--threads must be at least 1")),
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn from_args(input: &InputArgs, curve: &CurveArgs) -> Result<Self> {
        let phi = match (&curve.phi.phi_cos, &curve.phi.phi_labels, &curve.phi.phi_from_impostors) {
            (Some(s), None, None) => {
                if !(-1.0..=1.0).contains(s) {
                    return Err(CliError::usage(format!("--phi-cos must lie in [-1, 1], got {s}")));
                }
                PhiSource::Fixed(*s)
            }
            (None, Some(labels), None) => {
                check_percentile("phi-percentile", curve.phi_percentile)?;
                PhiSource::Conditional {
                    labels: labels.clone(),
                    percentile: curve.phi_percentile,
                }
            }
            (None, None, Some(scores)) => {
                let far = curve
                    .far
                    .ok_or_else(|| CliError::usage("--phi-from-impostors needs --far"))?;
                if !(far > 0.0 && far < 1.0) {
                    return Err(CliError::usage(format!("--far must lie in (0, 1), got {far}")));
                }
                PhiSource::Impostors {
                    scores: scores.clone(),
                    far,
                }
            }
            _ => {
                return Err(CliError::usage(
                    "exactly one of --phi-cos, --phi-labels, --phi-from-impostors is required",
                ))
            }
        };
        check_percentile("percentile", curve.percentile)?;
        let delta_cosines = match (&curve.delta_grid, curve.delta_cos.is_empty()) {
            (Some(grid), true) => parse_grid(grid)?,
            (None, false) => curve.delta_cos.clone(),
            (None, true) => return Err(CliError::usage("one of --delta-grid or --delta-cos is required")),
            (Some(_), false) => return Err(CliError::usage("--delta-grid and --delta-cos are exclusive")),
        };
        if curve.bins == 0 || curve.tile == 0 {
            return Err(CliError::usage("--bins and --tile must be positive"));
        }
        if let Some(n) = curve.dim {
            if n < 2 {
                return Err(CliError::usage(format!("--dim must be at least 2, got {n}")));
            }
        }
        check_threads(curve.run.threads)?;
        let RunArgs {
            threads,
            output,
            output_format,
        } = &curve.run;
        Ok(Self {
            embeddings: input.embeddings.clone(),
            format: input.format,
            phi,
            percentile: curve.percentile,
            delta_cosines,
            conventions: Conventions {
                theta: curve.theta_convention,
                phi: curve.phi_convention,
                delta: curve.delta_convention,
            },
            dim: curve.dim,
            histogram: HistogramConfig {
                bins: curve.bins,
                tile: curve.tile,
            },
            threads: *threads,
            output: output.clone(),
            output_format: *output_format,
        })
    }
}

/// Parses `lo:hi:steps` into `steps` evenly spaced values, endpoints
/// included.
pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let bad = || CliError::usage(format!("--delta-grid expects lo:hi:steps, got {text:?}"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, steps] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(CliError::usage("--delta-grid needs at least one step"));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let span = hi - lo;
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { hi } else { lo + span * k as f64 / last })
        .collect())
}
