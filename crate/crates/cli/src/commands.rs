use std::io::Write;
use std::path::Path;

use facecap::capacity::{angle_from_cosine, capacity_curve, AngleConvention};
use facecap::demographics::{subgroup_capacities, SubgroupParams};
use facecap::empirical::{
    estimate_conditional_intra_angle, estimate_population_angle, far_threshold, AngleEstimate,
};
use facecap::io::{read_embeddings, read_labels, read_scores, render_report, write_embeddings, write_labels};
use facecap::oracle::{mc_validate, synthesize_identities, SynthConfig};
use facecap::report::{curve_entries, AngleSummary, CapacityReport, Report, SubgroupDocument, TOOL_NAME, TOOL_VERSION};
use facecap::{EmbeddingSet, ScoreHistogram};

use crate::args::{McArgs, SubgroupArgs, SynthArgs};
use crate::config::{check_threads, PhiSource, RunConfig};
use crate::error::{CliError, Result};

/// Loads the embeddings named by `cfg` and scales every row to unit norm.
pub fn load_normalized(cfg: &RunConfig) -> Result<EmbeddingSet> {
    let raw = read_embeddings(&cfg.embeddings, cfg.format)?;
    log::info!("read {} rows of dimension {} from {}", raw.rows(), raw.dim(), cfg.embeddings.display());
    Ok(raw.normalize_rows()?)
}

/// Resolves φ from its configured source.
pub fn resolve_phi(cfg: &RunConfig, e: &EmbeddingSet) -> Result<AngleEstimate> {
    let conv = cfg.conventions.phi;
    let estimate = match &cfg.phi {
        PhiSource::Fixed(s) => AngleEstimate {
            angle: angle_from_cosine(*s, conv)?,
            threshold: *s,
        },
        PhiSource::Conditional { labels, percentile } => {
            let labels = read_labels(labels)?;
            estimate_conditional_intra_angle(e, &labels, *percentile, conv, &cfg.histogram)?
        }
        PhiSource::Impostors { scores, far } => {
            let scores = read_scores(scores)?;
            let h = ScoreHistogram::from_scores(cfg.histogram.bins, scores)?;
            let threshold = far_threshold(&h, *far)?;
            AngleEstimate {
                angle: angle_from_cosine(threshold, conv)?,
                threshold,
            }
        }
    };
    log::info!("phi = {:.6} rad from threshold {:.6} ({})", estimate.angle.radians(), estimate.threshold, cfg.phi.describe());
    Ok(estimate)
}

fn summary(a: &AngleEstimate, convention: AngleConvention, source: String) -> AngleSummary {
    AngleSummary {
        radians: a.angle.radians(),
        threshold: a.threshold,
        convention,
        source,
    }
}

fn model_dim(cfg: &RunConfig, e: &EmbeddingSet) -> Result<u32> {
    match cfg.dim {
        Some(n) => Ok(n),
        None => u32::try_from(e.dim()).map_err(|_| CliError::usage("embedding dimension exceeds u32")),
    }
}

pub fn estimate(cfg: &RunConfig) -> Result<Report> {
    let e = load_normalized(cfg)?;
    let n = model_dim(cfg, &e)?;
    let theta = estimate_population_angle(&e, cfg.percentile, cfg.conventions.theta, &cfg.histogram)?;
    log::info!("theta = {:.6} rad from threshold {:.6}", theta.angle.radians(), theta.threshold);
    let phi = resolve_phi(cfg, &e)?;
    let curve = capacity_curve(n, theta.angle, phi.angle, &cfg.delta_cosines, cfg.conventions.delta);
    Ok(Report::Capacity(CapacityReport {
        tool: TOOL_NAME.into(),
        version: TOOL_VERSION.into(),
        n_dim: n,
        rows: e.rows(),
        conventions: cfg.conventions,
        theta: summary(&theta, cfg.conventions.theta, format!("percentile:{}", cfg.percentile)),
        phi: summary(&phi, cfg.conventions.phi, cfg.phi.describe()),
        curve: curve_entries(&curve),
    }))
}

pub fn subgroup(cfg: &RunConfig, args: &SubgroupArgs) -> Result<Report> {
    if args.min_group_size < 2 {
        return Err(CliError::usage("--min-group-size must be at least 2"));
    }
    let e = load_normalized(cfg)?;
    let labels = read_labels(&args.labels)?;
    let n = model_dim(cfg, &e)?;
    let phi = resolve_phi(cfg, &e)?;
    let params = SubgroupParams {
        attribute: args.attribute.clone(),
        phi: phi.angle,
        delta_cosines: cfg.delta_cosines.clone(),
        n,
        percentile: cfg.percentile,
        theta_convention: cfg.conventions.theta,
        delta_convention: cfg.conventions.delta,
        min_group_size: args.min_group_size,
        histogram: cfg.histogram,
    };
    let report = subgroup_capacities(&e, &labels, &params)?;
    for s in &report.skipped {
        log::warn!("skipped category {:?}: {}", s.category, s.reason);
    }
    let phi = summary(&phi, cfg.conventions.phi, cfg.phi.describe());
    Ok(Report::Subgroup(SubgroupDocument::new(&report, n, cfg.conventions, phi, cfg.percentile)))
}

/// Writes a rendered report to the configured file or to `stdout`.
pub fn emit(cfg: &RunConfig, report: &Report, stdout: &mut dyn Write) -> Result<()> {
    let text = render_report(report, cfg.output_format);
    match &cfg.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|source| CliError::Output {
            path: "<stdout>".into(),
            source,
        }),
    }
}

/// Runs the Monte Carlo check and returns its `key=value` summary with
/// the verdict.
pub fn mc(args: &McArgs) -> Result<(String, bool)> {
    check_threads(args.threads)?;
    if args.samples == 0 {
        return Err(CliError::usage("--samples must be positive"));
    }
    if args.sigmas.is_nan() || args.sigmas <= 0.0 {
        return Err(CliError::usage("--sigmas must be positive"));
    }
    let v = mc_validate(args.dim, args.omega1, args.omega2, args.samples, args.seed)?;
    let pass = v.passes(args.sigmas);
    let out = format!(
        "dim={}\nomega1={}\nomega2={}\nsamples={}\nseed={}\nformula={:e}\nmc_ratio={:e}\nstd_error={:e}\npopulation_hits={}\nidentity_hits={}\nz_score={:.4}\nresult={}\n",
        args.dim,
        args.omega1,
        args.omega2,
        args.samples,
        args.seed,
        v.formula,
        v.ratio,
        v.std_error,
        v.population.hits,
        v.identity.hits,
        v.z_score,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok((out, pass))
}

pub fn synth(args: &SynthArgs) -> Result<()> {
    check_threads(args.threads)?;
    if !(args.kappa >= 0.0 && args.kappa.is_finite()) {
        return Err(CliError::usage(format!("--kappa must be finite and >= 0, got {}", args.kappa)));
    }
    if args.identities * args.per_identity < 2 {
        return Err(CliError::usage("--identities x --per-identity must be at least 2"));
    }
    let (e, labels) = synthesize_identities(&SynthConfig {
        identities: args.identities,
        per_identity: args.per_identity,
        kappa: args.kappa,
        dim: args.dim,
        seed: args.seed,
        groups: args.groups,
    })?;
    write_embeddings(&e, &args.out_embeddings)?;
    write_labels(&labels, &args.out_labels)?;
    log::info!(
        "wrote {} rows to {} and {}",
        e.rows(),
        display(&args.out_embeddings),
        display(&args.out_labels)
    );
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
