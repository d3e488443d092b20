//! Serializable result documents.

use serde::{Deserialize, Serialize};

use crate::capacity::{AngleConvention, Conventions, CurvePoint};
use crate::demographics::SubgroupReport;

pub const TOOL_NAME: &str = "facecap";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One row of a capacity curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveEntry {
    pub cos_delta: f64,
    pub capacity: Option<f64>,
    pub ln_capacity: Option<f64>,
    pub omega1: Option<f64>,
    pub omega2: Option<f64>,
    pub clamped_population: bool,
    pub clamped_identity: bool,
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl From<&CurvePoint> for CurveEntry {
    fn from(p: &CurvePoint) -> Self {
        match &p.estimate {
            Ok(est) => CurveEntry {
                cos_delta: p.cos_delta,
                capacity: est.capacity,
                ln_capacity: est.ln_capacity,
                omega1: Some(est.omega1.radians()),
                omega2: Some(est.omega2.radians()),
                clamped_population: est.clamped_population,
                clamped_identity: est.clamped_identity,
                degenerate: est.degenerate,
                error: None,
            },
            Err(err) => CurveEntry {
                cos_delta: p.cos_delta,
                capacity: None,
                ln_capacity: None,
                omega1: None,
                omega2: None,
                clamped_population: false,
                clamped_identity: false,
                degenerate: false,
                error: Some(err.to_string()),
            },
        }
    }
}

pub fn curve_entries(curve: &[CurvePoint]) -> Vec<CurveEntry> {
    curve.iter().map(CurveEntry::from).collect()
}

/// An angle together with the cosine it came from and how it was derived.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleSummary {
    pub radians: f64,
    pub threshold: f64,
    pub convention: AngleConvention,
    /// e.g. "percentile:5", "fixed", "conditional:5", "far:0.001"
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityReport {
    pub tool: String,
    pub version: String,
    pub n_dim: u32,
    pub rows: usize,
    pub conventions: Conventions,
    pub theta: AngleSummary,
    pub phi: AngleSummary,
    pub curve: Vec<CurveEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub category: String,
    pub member_count: usize,
    pub theta: AngleSummary,
    pub curve: Vec<CurveEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedEntry {
    pub category: String,
    pub member_count: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgroupDocument {
    pub tool: String,
    pub version: String,
    pub n_dim: u32,
    pub attribute: String,
    pub conventions: Conventions,
    pub phi: AngleSummary,
    pub groups: Vec<GroupEntry>,
    pub skipped: Vec<SkippedEntry>,
}

impl SubgroupDocument {
    pub fn new(
        report: &SubgroupReport,
        n_dim: u32,
        conventions: Conventions,
        phi: AngleSummary,
        percentile: f64,
    ) -> Self {
        Self {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            n_dim,
            attribute: report.attribute.clone(),
            conventions,
            phi,
            groups: report
                .groups
                .iter()
                .map(|g| GroupEntry {
                    category: g.category.clone(),
                    member_count: g.member_count,
                    theta: AngleSummary {
                        radians: g.theta.angle.radians(),
                        threshold: g.theta.threshold,
                        convention: conventions.theta,
                        source: format!("percentile:{percentile}"),
                    },
                    curve: curve_entries(&g.curve),
                })
                .collect(),
            skipped: report
                .skipped
                .iter()
                .map(|s| SkippedEntry {
                    category: s.category.clone(),
                    member_count: s.member_count,
                    reason: s.reason.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Capacity(CapacityReport),
    Subgroup(SubgroupDocument),
}
