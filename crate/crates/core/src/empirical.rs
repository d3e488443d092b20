//! Estimating the model's angles from embedding data.
//!
//! Pairwise cosine scores are never materialized: for 50 000 embeddings
//! there are ~1.25×10⁹ of them. They are binned into a fixed-width
//! histogram over [−1, 1] instead, computed tile by tile with one private
//! histogram per worker and an integer merge at the end, so counts do not
//! depend on thread count or scheduling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::capacity::{angle_from_cosine, Angle, AngleConvention};
use crate::error::{Error, Result};
use crate::exec;
use crate::kernel;

pub const DEFAULT_BINS: usize = 20_001;
pub const DEFAULT_TILE: usize = 512;
pub const DEFAULT_PERCENTILE: f64 = 5.0;

/// Rows further than this from unit norm are not considered normalized.
pub const UNIT_NORM_TOLERANCE: f64 = 1e-6;
const MIN_NORM: f64 = 1e-12;

/// N×n matrix of embeddings, row-major, immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    rows: usize,
    dim: usize,
    data: Vec<f64>,
    normalized: bool,
}

impl EmbeddingSet {
    pub fn new(rows: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        if rows < 2 {
            return Err(Error::InvalidEmbeddings(format!("need at least 2 rows, got {rows}")));
        }
        if dim < 2 {
            return Err(Error::InvalidEmbeddings(format!("need dimension >= 2, got {dim}")));
        }
        if rows.checked_mul(dim) != Some(data.len()) {
            return Err(Error::InvalidEmbeddings(format!(
                "{} values do not form a {rows}x{dim} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidEmbeddings(format!(
                "non-finite value at row {}, column {}",
                pos / dim,
                pos % dim
            )));
        }
        Ok(Self {
            rows,
            dim,
            data,
            normalized: false,
        })
    }

    /// Single-precision input, widened to `f64`.
    pub fn from_f32(rows: usize, dim: usize, data: &[f32]) -> Result<Self> {
        Self::new(rows, dim, data.iter().map(|&v| f64::from(v)).collect())
    }

    /// Builds a set whose rows are already unit norm, verifying that they are.
    pub fn from_unit_rows(rows: usize, dim: usize, data: Vec<f64>) -> Result<Self> {
        let mut set = Self::new(rows, dim, data)?;
        if let Some(row) = (0..rows).find(|&i| (norm(set.row(i)) - 1.0).abs() > UNIT_NORM_TOLERANCE) {
            return Err(Error::InvalidEmbeddings(format!("row {row} is not unit norm")));
        }
        set.normalized = true;
        Ok(set)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Rows at `indices`, in that order. Keeps the normalized flag.
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            if i >= self.rows {
                return Err(Error::InvalidEmbeddings(format!(
                    "row {i} out of range for {} rows",
                    self.rows
                )));
            }
            data.extend_from_slice(self.row(i));
        }
        let mut set = Self::new(indices.len(), self.dim, data)?;
        set.normalized = self.normalized;
        Ok(set)
    }

    /// Scales each row to unit norm.
    pub fn normalize_rows(&self) -> Result<Self> {
        let mut data = self.data.clone();
        for (row, chunk) in data.chunks_exact_mut(self.dim).enumerate() {
            let nrm = norm(chunk);
            if nrm.is_nan() || nrm <= MIN_NORM {
                return Err(Error::ZeroNorm { row });
            }
            chunk.iter_mut().for_each(|v| *v /= nrm);
        }
        Ok(Self {
            rows: self.rows,
            dim: self.dim,
            data,
            normalized: true,
        })
    }
}

/// Free-function form of [`EmbeddingSet::normalize_rows`].
pub fn normalize_rows(e: &EmbeddingSet) -> Result<EmbeddingSet> {
    e.normalize_rows()
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Fixed-width histogram of cosine scores over [−1, 1].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreHistogram {
    counts: Vec<u64>,
    total: u64,
}

impl ScoreHistogram {
    pub const LO: f64 = -1.0;
    pub const HI: f64 = 1.0;

    pub fn new(bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::domain("ScoreHistogram::new", "bin count must be positive"));
        }
        Ok(Self {
            counts: vec![0; bins],
            total: 0,
        })
    }

    pub fn from_scores<I: IntoIterator<Item = f64>>(bins: usize, scores: I) -> Result<Self> {
        let mut h = Self::new(bins)?;
        for s in scores {
            if !s.is_finite() {
                return Err(Error::domain("ScoreHistogram", "non-finite score"));
            }
            h.add(s);
        }
        Ok(h)
    }

    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn width(&self) -> f64 {
        (Self::HI - Self::LO) / self.counts.len() as f64
    }

    /// floor((s − lo) / width), clamped into the histogram.
    pub fn bin_index(&self, s: f64) -> usize {
        bin_index(s, self.width(), self.counts.len())
    }

    pub fn lower_edge(&self, bin: usize) -> f64 {
        Self::LO + bin as f64 * self.width()
    }

    pub fn upper_edge(&self, bin: usize) -> f64 {
        (Self::LO + (bin + 1) as f64 * self.width()).min(Self::HI)
    }

    pub fn add(&mut self, s: f64) {
        let i = self.bin_index(s);
        self.counts[i] += 1;
        self.total += 1;
    }

    /// Adds another histogram's counts. Panics on a bin-count mismatch.
    pub fn merge(&mut self, other: &ScoreHistogram) {
        assert_eq!(self.counts.len(), other.counts.len(), "histogram bin counts differ");
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.total += other.total;
    }

    fn from_counts(counts: Vec<u64>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }
}

#[inline]
pub(crate) fn bin_index(s: f64, width: f64, bins: usize) -> usize {
    let idx = ((s - ScoreHistogram::LO) / width).floor();
    if idx <= 0.0 {
        0
    } else {
        (idx as usize).min(bins - 1)
    }
}

/// Bin count and tile size for the pairwise computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistogramConfig {
    pub bins: usize,
    pub tile: usize,
}

impl Default for HistogramConfig {
    fn default() -> Self {
        Self {
            bins: DEFAULT_BINS,
            tile: DEFAULT_TILE,
        }
    }
}

impl HistogramConfig {
    pub fn with_bins(bins: usize) -> Self {
        Self {
            bins,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.bins == 0 || self.tile == 0 {
            return Err(Error::domain(
                "pairwise_score_histogram",
                "bin count and tile size must be positive",
            ));
        }
        Ok(())
    }
}

/// Number of upper-triangular tile pairs (bi ≤ bj) over `tiles` tiles.
fn tile_pairs(tiles: usize) -> usize {
    tiles * (tiles + 1) / 2
}

/// Inverse of the row-major enumeration of tile pairs (bi ≤ bj).
fn tile_pair(mut k: usize, tiles: usize) -> (usize, usize) {
    let mut bi = 0;
    while k >= tiles - bi {
        k -= tiles - bi;
        bi += 1;
    }
    (bi, bi + k)
}

fn check_histogram_input(e: &EmbeddingSet, cfg: &HistogramConfig) -> Result<()> {
    cfg.validate()?;
    if !e.normalized {
        return Err(Error::NotNormalized);
    }
    Ok(())
}

/// Histogram of the cosine similarity of every unordered pair of distinct
/// rows, N(N−1)/2 scores in all. Runs on the current rayon pool when the
/// `parallel` feature is enabled.
pub fn pairwise_score_histogram(e: &EmbeddingSet, cfg: &HistogramConfig) -> Result<ScoreHistogram> {
    check_histogram_input(e, cfg)?;
    let tiles = e.rows.div_ceil(cfg.tile);
    let width = (ScoreHistogram::HI - ScoreHistogram::LO) / cfg.bins as f64;
    log::debug!(
        "pairwise histogram: {} rows, dim {}, {} tile pairs of {}, {} bins, {} threads",
        e.rows,
        e.dim,
        tile_pairs(tiles),
        cfg.tile,
        cfg.bins,
        exec::current_num_threads()
    );
    let counts = exec::fold_range(
        tile_pairs(tiles),
        || vec![0u64; cfg.bins],
        |mut counts, k| {
            let (bi, bj) = tile_pair(k, tiles);
            kernel::accumulate_tile(e, bi, bj, cfg.tile, width, &mut counts);
            counts
        },
        |mut a, b| {
            a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
            a
        },
    );
    Ok(ScoreHistogram::from_counts(counts))
}

/// Single-threaded reference path over the same tiles and kernel.
pub fn pairwise_score_histogram_sequential(
    e: &EmbeddingSet,
    cfg: &HistogramConfig,
) -> Result<ScoreHistogram> {
    check_histogram_input(e, cfg)?;
    let tiles = e.rows.div_ceil(cfg.tile);
    let width = (ScoreHistogram::HI - ScoreHistogram::LO) / cfg.bins as f64;
    let mut counts = vec![0u64; cfg.bins];
    for k in 0..tile_pairs(tiles) {
        let (bi, bj) = tile_pair(k, tiles);
        kernel::accumulate_tile(e, bi, bj, cfg.tile, width, &mut counts);
    }
    Ok(ScoreHistogram::from_counts(counts))
}

/// Cosine similarity of two rows of a normalized set, computed exactly as
/// the histogram kernel does.
pub fn cosine(e: &EmbeddingSet, i: usize, j: usize) -> f64 {
    kernel::dot(e.row(i), e.row(j))
}

/// Nearest-rank percentile on a histogram: the upper edge of the first bin
/// whose cumulative count reaches ceil(p/100 · total).
pub fn percentile_threshold(h: &ScoreHistogram, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 100.0) {
        return Err(Error::domain("percentile_threshold", format!("percentile {p} outside (0, 100]")));
    }
    if h.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let rank = ((p * h.total as f64) / 100.0).ceil().max(1.0) as u64;
    let rank = rank.min(h.total);
    let mut cumulative = 0u64;
    for (i, &c) in h.counts.iter().enumerate() {
        cumulative += c;
        if cumulative >= rank {
            return Ok(h.upper_edge(i));
        }
    }
    unreachable!("cumulative count reaches total")
}

/// Matcher threshold at a false acceptance rate: the smallest bin upper
/// edge t such that at most `far · total` impostor scores lie at or above t.
pub fn far_threshold(impostors: &ScoreHistogram, far: f64) -> Result<f64> {
    if !(far > 0.0 && far < 1.0) {
        return Err(Error::domain("far_threshold", format!("FAR {far} outside (0, 1)")));
    }
    if impostors.total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let allowed = (far * impostors.total as f64).floor() as u64;
    let mut above = impostors.total;
    for (i, &c) in impostors.counts.iter().enumerate() {
        above -= c;
        if above <= allowed {
            return Ok(impostors.upper_edge(i));
        }
    }
    unreachable!("all scores are counted")
}

/// An estimated model angle with the cosine threshold it came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleEstimate {
    pub angle: Angle,
    pub threshold: f64,
}

/// Population half-angle θ from the p-th percentile (low-similarity tail)
/// of the all-pairs score distribution.
pub fn estimate_population_angle(
    e: &EmbeddingSet,
    p: f64,
    conv: AngleConvention,
    cfg: &HistogramConfig,
) -> Result<AngleEstimate> {
    let h = pairwise_score_histogram(e, cfg)?;
    let threshold = percentile_threshold(&h, p)?;
    Ok(AngleEstimate {
        angle: angle_from_cosine(threshold, conv)?,
        threshold,
    })
}

/// Identity and attribute labels for one embedding row.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelRecord {
    pub identity: Option<String>,
    pub attributes: BTreeMap<String, String>,
}

/// Per-row labels keyed by row index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelTable {
    records: BTreeMap<usize, LabelRecord>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, row: usize, record: LabelRecord) -> Result<()> {
        if self.records.contains_key(&row) {
            return Err(Error::Labels(format!("duplicate row index {row}")));
        }
        self.records.insert(row, record);
        Ok(())
    }

    pub fn get(&self, row: usize) -> Option<&LabelRecord> {
        self.records.get(&row)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &LabelRecord)> {
        self.records.iter().map(|(&row, rec)| (row, rec))
    }

    /// Checks that every row index refers to one of `rows` embeddings.
    pub fn validate_rows(&self, rows: usize) -> Result<()> {
        match self.records.keys().next_back() {
            Some(&max) if max >= rows => Err(Error::Labels(format!(
                "row index {max} out of range for {rows} embeddings"
            ))),
            _ => Ok(()),
        }
    }

    /// Row indices grouped by identity, in identity-name order.
    pub fn identity_groups(&self) -> BTreeMap<&str, Vec<usize>> {
        let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (&row, rec) in &self.records {
            if let Some(id) = rec.identity.as_deref() {
                groups.entry(id).or_default().push(row);
            }
        }
        groups
    }

    /// Row indices grouped by the category of `attribute`; rows without it
    /// are left out.
    pub fn attribute_groups(&self, attribute: &str) -> BTreeMap<&str, Vec<usize>> {
        let mut groups: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
        for (&row, rec) in &self.records {
            if let Some(cat) = rec.attributes.get(attribute) {
                groups.entry(cat.as_str()).or_default().push(row);
            }
        }
        groups
    }
}

/// Middle value of `values`; the mean of the two middle values for an even
/// count. `None` when empty.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    Some(if sorted.len().is_multiple_of(2) {
        0.5 * (sorted[mid - 1] + sorted[mid])
    } else {
        sorted[mid]
    })
}

/// Intra-class half-angle φ for labelled data: the median over identities
/// of each identity's p-th percentile intra-identity score.
pub fn estimate_conditional_intra_angle(
    e: &EmbeddingSet,
    labels: &LabelTable,
    per_id_percentile: f64,
    conv: AngleConvention,
    cfg: &HistogramConfig,
) -> Result<AngleEstimate> {
    if !e.normalized {
        return Err(Error::NotNormalized);
    }
    labels.validate_rows(e.rows)?;
    if let Some(row) = (0..e.rows).find(|&r| labels.get(r).and_then(|l| l.identity.as_ref()).is_none()) {
        return Err(Error::Labels(format!("row {row} has no identity label")));
    }
    let groups: Vec<Vec<usize>> = labels
        .identity_groups()
        .into_values()
        .filter(|rows| rows.len() >= 2)
        .collect();
    if groups.is_empty() {
        return Err(Error::InsufficientData(
            "no identity has at least two embeddings".into(),
        ));
    }
    let thresholds = exec::map_ordered(&groups, |rows| {
        let mut h = ScoreHistogram::new(cfg.bins)?;
        for (k, &i) in rows.iter().enumerate() {
            for &j in &rows[k + 1..] {
                h.add(cosine(e, i, j));
            }
        }
        percentile_threshold(&h, per_id_percentile)
    })
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    let threshold = median(&thresholds).expect("at least one identity");
    Ok(AngleEstimate {
        angle: angle_from_cosine(threshold, conv)?,
        threshold,
    })
}
