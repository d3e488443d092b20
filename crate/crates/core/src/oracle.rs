//! Sampling machinery for validating the cap model independently of the
//! special functions: uniform points on the sphere, Monte Carlo cap
//! fractions and von Mises-Fisher identity clusters.
//!
//! Draws are produced in fixed blocks of rows, each block by its own ChaCha
//! stream keyed on (seed, purpose, block index). Output therefore depends
//! only on the seed, never on how blocks are spread over workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};

use crate::capacity::capacity as formula_capacity;
use crate::capacity::Angle;
use crate::empirical::{EmbeddingSet, LabelRecord, LabelTable, UNIT_NORM_TOLERANCE};
use crate::error::{Error, Result};
use crate::exec;

/// Rows generated per RNG stream.
const BLOCK: usize = 1024;

const PURPOSE_UNIFORM: u64 = 1;
const PURPOSE_MC: u64 = 2;
const PURPOSE_VMF: u64 = 3;
const PURPOSE_SYNTH: u64 = 4;

/// SplitMix64 finalizer, used to derive independent seeds.
pub fn mix_seed(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_rng(seed: u64, purpose: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed ^ purpose.rotate_left(56)));
    rng.set_stream(block);
    rng
}

/// Splits `count` into BLOCK-sized chunks, generates each with its own
/// stream and concatenates them in order.
fn generate_blocks<F>(count: usize, seed: u64, purpose: u64, per_row: usize, fill: F) -> Vec<f64>
where
    F: Fn(&mut ChaCha8Rng, &mut [f64]) + Sync + Send,
{
    let blocks = count.div_ceil(BLOCK);
    let parts = exec::map_range(blocks, |b| {
        let rows = BLOCK.min(count - b * BLOCK);
        let mut rng = stream_rng(seed, purpose, b as u64);
        let mut out = vec![0.0; rows * per_row];
        for row in out.chunks_exact_mut(per_row) {
            fill(&mut rng, row);
        }
        out
    });
    parts.concat()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub dim: usize,
    pub seed: u64,
    pub count: usize,
}

impl SamplerConfig {
    pub fn new(dim: usize, seed: u64, count: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::domain("SamplerConfig", format!("dimension {dim} < 2")));
        }
        if count == 0 {
            return Err(Error::domain("SamplerConfig", "count must be positive"));
        }
        Ok(Self { dim, seed, count })
    }
}

/// Isotropic Gaussian vector scaled to unit norm.
fn unit_gaussian<R: Rng + ?Sized>(rng: &mut R, out: &mut [f64]) {
    loop {
        let mut sq = 0.0;
        for v in out.iter_mut() {
            *v = rng.sample(StandardNormal);
            sq += *v * *v;
        }
        if sq > 0.0 {
            let inv = 1.0 / sq.sqrt();
            out.iter_mut().for_each(|v| *v *= inv);
            return;
        }
    }
}

/// `count` points uniform on the unit sphere in R^dim. Needs count ≥ 2 to
/// form an [`EmbeddingSet`].
pub fn sample_uniform_sphere(c: &SamplerConfig) -> Result<EmbeddingSet> {
    let data = generate_blocks(c.count, c.seed, PURPOSE_UNIFORM, c.dim, unit_gaussian);
    EmbeddingSet::from_unit_rows(c.count, c.dim, data)
}

/// Monte Carlo estimate of a cap fraction with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub fraction: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Fraction of uniform samples x with ⟨x, e₁⟩ ≥ cos ω.
pub fn mc_cap_fraction(n: usize, omega: f64, samples: u64, seed: u64) -> Result<McEstimate> {
    if n < 2 {
        return Err(Error::domain("mc_cap_fraction", format!("dimension {n} < 2")));
    }
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&omega) {
        return Err(Error::domain(
            "mc_cap_fraction",
            format!("cap half-angle {omega} outside [0, pi/2]"),
        ));
    }
    if samples == 0 {
        return Err(Error::domain("mc_cap_fraction", "sample count must be positive"));
    }
    let cos_omega = omega.cos();
    let total = samples as usize;
    let blocks = total.div_ceil(BLOCK);
    let hits: u64 = exec::map_range(blocks, |b| {
        let rows = BLOCK.min(total - b * BLOCK);
        let mut rng = stream_rng(seed, PURPOSE_MC, b as u64);
        let mut x = vec![0.0; n];
        let mut hits = 0u64;
        for _ in 0..rows {
            unit_gaussian(&mut rng, &mut x);
            if x[0] >= cos_omega {
                hits += 1;
            }
        }
        hits
    })
    .into_iter()
    .sum();
    let fraction = hits as f64 / samples as f64;
    Ok(McEstimate {
        fraction,
        std_error: (fraction * (1.0 - fraction) / samples as f64).sqrt(),
        hits,
        samples,
    })
}

/// Formula capacity next to its Monte Carlo counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McValidation {
    pub formula: f64,
    pub population: McEstimate,
    pub identity: McEstimate,
    /// Ratio of the two Monte Carlo fractions.
    pub ratio: f64,
    /// Propagated standard error of `ratio`.
    pub std_error: f64,
    /// |ratio − formula| / std_error
    pub z_score: f64,
}

impl McValidation {
    /// Agreement within `sigmas` propagated standard errors. Fails when the
    /// identity cap drew no samples, since the ratio is then undefined.
    pub fn passes(&self, sigmas: f64) -> bool {
        self.identity.hits > 0 && self.z_score <= sigmas
    }
}

/// Compares capacity() at cap half-angles (Ω₁, Ω₂) with the ratio of two
/// independent Monte Carlo cap fractions.
pub fn mc_validate(n: usize, omega1: f64, omega2: f64, samples: u64, seed: u64) -> Result<McValidation> {
    let dim = u32::try_from(n).map_err(|_| Error::domain("mc_validate", "dimension too large"))?;
    let population = mc_cap_fraction(n, omega1, samples, seed)?;
    let identity = mc_cap_fraction(n, omega2, samples, mix_seed(seed))?;
    let est = formula_capacity(dim, Angle::new(omega1)?, Angle::new(omega2)?, Angle::ZERO)?;
    let formula = est
        .capacity
        .ok_or_else(|| Error::domain("mc_validate", "identity cap has zero extent"))?;
    let ratio = population.fraction / identity.fraction;
    let rel = |m: &McEstimate| m.std_error / m.fraction;
    let std_error = ratio * (rel(&population).powi(2) + rel(&identity).powi(2)).sqrt();
    let z_score = if std_error > 0.0 {
        (ratio - formula).abs() / std_error
    } else if ratio == formula {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(McValidation {
        formula,
        population,
        identity,
        ratio,
        std_error,
        z_score,
    })
}

/// Wood's rejection sampler for w = ⟨x, μ⟩ under vMF(κ) on S^{n−1}.
struct WoodSampler {
    kappa: f64,
    dm1: f64,
    b: f64,
    x0: f64,
    c: f64,
    beta: Beta<f64>,
}

impl WoodSampler {
    fn new(n: usize, kappa: f64) -> Self {
        let dm1 = (n - 1) as f64;
        // (−2κ + √(4κ² + (n−1)²)) / (n−1), rearranged to avoid cancellation
        let b = dm1 / (2.0 * kappa + (4.0 * kappa * kappa + dm1 * dm1).sqrt());
        let x0 = (1.0 - b) / (1.0 + b);
        let c = kappa * x0 + dm1 * (1.0 - x0 * x0).ln();
        let half = 0.5 * dm1;
        Self {
            kappa,
            dm1,
            b,
            x0,
            c,
            beta: Beta::new(half, half).expect("shape parameters are positive"),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let z = self.beta.sample(rng);
            let w = (1.0 - (1.0 + self.b) * z) / (1.0 - (1.0 - self.b) * z);
            let u: f64 = rng.gen();
            if self.kappa * w + self.dm1 * (1.0 - self.x0 * w).ln() - self.c >= u.ln() {
                return w;
            }
        }
    }
}

fn vmf_rows(n: usize, mu: &[f64], kappa: f64, count: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 2 || mu.len() != n {
        return Err(Error::domain(
            "sample_vmf",
            format!("mean direction has {} components, dimension is {n}", mu.len()),
        ));
    }
    let mu_norm = mu.iter().map(|v| v * v).sum::<f64>().sqrt();
    if (mu_norm - 1.0).abs() > UNIT_NORM_TOLERANCE {
        return Err(Error::domain("sample_vmf", format!("mean direction has norm {mu_norm}")));
    }
    if !(kappa >= 0.0 && kappa.is_finite()) {
        return Err(Error::domain("sample_vmf", format!("concentration {kappa} must be >= 0")));
    }
    let wood = WoodSampler::new(n, kappa);
    Ok(generate_blocks(count, seed, PURPOSE_VMF, n, |rng, x| {
        let w = wood.sample(rng);
        // tangent direction: Gaussian with the μ component removed
        loop {
            let mut along = 0.0;
            for (v, m) in x.iter_mut().zip(mu) {
                *v = rng.sample(StandardNormal);
                along += *v * m;
            }
            let mut sq = 0.0;
            for (v, m) in x.iter_mut().zip(mu) {
                *v -= along * m;
                sq += *v * *v;
            }
            if sq > 1e-24 {
                let scale = (1.0 - w * w).max(0.0).sqrt() / sq.sqrt();
                for (v, m) in x.iter_mut().zip(mu) {
                    *v = w * m + scale * *v;
                }
                break;
            }
        }
        let inv = 1.0 / x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v *= inv);
    }))
}

/// `count` draws from the von Mises-Fisher distribution with mean
/// direction `mu` and concentration `kappa`; κ = 0 is uniform.
pub fn sample_vmf(n: usize, mu: &[f64], kappa: f64, count: usize, seed: u64) -> Result<EmbeddingSet> {
    let data = vmf_rows(n, mu, kappa, count, seed)?;
    EmbeddingSet::from_unit_rows(count, n, data)
}

/// Parameters of a synthetic labelled dataset of vMF identity clusters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub identities: usize,
    pub per_identity: usize,
    pub kappa: f64,
    pub dim: usize,
    pub seed: u64,
    /// When nonzero, each identity also gets a `group` attribute
    /// `g{identity % groups}`.
    pub groups: usize,
}

/// K identities with uniformly drawn mean directions, m vMF draws around
/// each. Rows are grouped by identity; labels carry identity names
/// `id{k}` (zero padded) and the optional `group` attribute.
pub fn synthesize_identities(cfg: &SynthConfig) -> Result<(EmbeddingSet, LabelTable)> {
    if cfg.identities == 0 || cfg.per_identity == 0 {
        return Err(Error::domain("synthesize_identities", "identities and per-identity count must be positive"));
    }
    if cfg.dim < 2 {
        return Err(Error::domain("synthesize_identities", format!("dimension {} < 2", cfg.dim)));
    }
    let means = generate_blocks(cfg.identities, cfg.seed, PURPOSE_SYNTH, cfg.dim, unit_gaussian);
    let clusters = exec::map_range(cfg.identities, |k| {
        let mu = &means[k * cfg.dim..(k + 1) * cfg.dim];
        vmf_rows(cfg.dim, mu, cfg.kappa, cfg.per_identity, mix_seed(cfg.seed ^ mix_seed(k as u64)))
    });
    let mut data = Vec::with_capacity(cfg.identities * cfg.per_identity * cfg.dim);
    for c in clusters {
        data.extend(c?);
    }
    let rows = cfg.identities * cfg.per_identity;
    let set = EmbeddingSet::from_unit_rows(rows, cfg.dim, data)?;

    let width = cfg.identities.saturating_sub(1).to_string().len();
    let mut labels = LabelTable::new();
    for row in 0..rows {
        let k = row / cfg.per_identity;
        let mut rec = LabelRecord {
            identity: Some(format!("id{k:0width$}")),
            ..Default::default()
        };
        if cfg.groups > 0 {
            rec.attributes.insert("group".into(), format!("g{}", k % cfg.groups));
        }
        labels.insert(row, rec)?;
    }
    Ok((set, labels))
}
