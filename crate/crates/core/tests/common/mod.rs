#![allow(dead_code)]

pub mod reference;

use facecap::empirical::{cosine, EmbeddingSet, ScoreHistogram};

/// Every pairwise score, brute force, in (i < j) order.
pub fn all_scores(e: &EmbeddingSet) -> Vec<f64> {
    let mut out = Vec::with_capacity(e.rows() * (e.rows() - 1) / 2);
    for i in 0..e.rows() {
        for j in i + 1..e.rows() {
            out.push(cosine(e, i, j));
        }
    }
    out
}

/// Scores from a naive f64 loop, independent of the tiled kernel.
pub fn naive_scores(e: &EmbeddingSet) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..e.rows() {
        for j in i + 1..e.rows() {
            out.push(e.row(i).iter().zip(e.row(j)).map(|(a, b)| a * b).sum());
        }
    }
    out
}

/// Histogram filled one score at a time.
pub fn brute_histogram(e: &EmbeddingSet, bins: usize) -> ScoreHistogram {
    ScoreHistogram::from_scores(bins, all_scores(e)).unwrap()
}

/// Nearest-rank percentile of a score list: the value at rank ceil(p/100 · N).
pub fn exact_percentile(scores: &[f64], p: f64) -> f64 {
    let mut s = scores.to_vec();
    s.sort_by(f64::total_cmp);
    let rank = ((p * s.len() as f64) / 100.0).ceil().max(1.0) as usize;
    s[rank.min(s.len()) - 1]
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }
}
