//! Biometric capacity of a set of hyperspherical embeddings.
//!
//! A population of embeddings on the unit sphere in Rⁿ is modelled as a
//! cap of half-angle θ, a single identity as a cap of half-angle φ, and the
//! matcher's threshold widens both by δ. Capacity, the number of distinct
//! identities the population can hold, is the ratio of the two cap areas:
//!
//! ```text
//! C(θ, φ, δ) = I_{sin²(θ+δ)}((n−1)/2, ½) / I_{sin²(φ+δ)}((n−1)/2, ½)
//! ```
//!
//! Modules:
//!
//! - [`specfun`]: log-gamma, regularized incomplete beta, sphere and cap areas
//! - [`capacity`]: angles, the capacity ratio and threshold sweeps
//! - [`empirical`]: estimating θ and φ from embeddings (pairwise score
//!   histograms, percentiles, FAR thresholds)
//! - [`demographics`]: per-subgroup capacity
//! - [`oracle`]: uniform / von Mises-Fisher sampling and Monte Carlo checks
//! - [`io`]: EMB1 binary and CSV embeddings, labels, reports
//!
//! ```
//! use facecap::capacity::{angle_from_cosine, capacity, AngleConvention};
//!
//! let theta = angle_from_cosine(-0.05, AngleConvention::Half).unwrap();
//! let phi = angle_from_cosine(0.2125, AngleConvention::Half).unwrap();
//! let delta = angle_from_cosine(0.9, AngleConvention::Full).unwrap();
//! let c = capacity(512, theta, phi, delta).unwrap();
//! assert!(c.capacity.unwrap() > 1.0);
//! ```
//!
//! The `parallel` feature (on by default) runs the pairwise histogram,
//! sampling and sweeps on rayon; without it the same code runs sequentially
//! and produces identical results.

pub mod capacity;
pub mod demographics;
pub mod empirical;
pub mod error;
mod exec;
pub mod io;
mod kernel;
pub mod oracle;
pub mod report;
pub mod specfun;

pub use capacity::{Angle, AngleConvention, CapacityEstimate, Conventions};
pub use empirical::{EmbeddingSet, HistogramConfig, LabelTable, ScoreHistogram};
pub use error::{Error, FormatError, Result};
pub use exec::current_num_threads;
