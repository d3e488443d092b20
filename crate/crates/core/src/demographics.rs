//! Capacity per demographic subgroup.
//!
//! Each category of an attribute gets its own population angle, estimated
//! on the rows in that category alone; the identity angle φ is shared.

use crate::capacity::{capacity_curve, Angle, AngleConvention, CurvePoint};
use crate::empirical::{estimate_population_angle, AngleEstimate, EmbeddingSet, HistogramConfig, LabelTable};
use crate::error::{Error, Result};
use crate::exec;

pub const DEFAULT_MIN_GROUP_SIZE: usize = 50;

#[derive(Debug, Clone)]
pub struct SubgroupParams {
    pub attribute: String,
    pub phi: Angle,
    pub delta_cosines: Vec<f64>,
    /// Ambient dimension used in the capacity formula.
    pub n: u32,
    pub percentile: f64,
    pub theta_convention: AngleConvention,
    pub delta_convention: AngleConvention,
    pub min_group_size: usize,
    pub histogram: HistogramConfig,
}

#[derive(Debug)]
pub struct GroupResult {
    pub category: String,
    pub member_count: usize,
    pub theta: AngleEstimate,
    pub curve: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedGroup {
    pub category: String,
    pub member_count: usize,
    pub reason: String,
}

#[derive(Debug)]
pub struct SubgroupReport {
    pub attribute: String,
    /// In category-name order.
    pub groups: Vec<GroupResult>,
    pub skipped: Vec<SkippedGroup>,
}

impl SubgroupReport {
    /// Rows carrying the attribute, processed or skipped.
    pub fn labelled_rows(&self) -> usize {
        self.groups.iter().map(|g| g.member_count).sum::<usize>()
            + self.skipped.iter().map(|s| s.member_count).sum::<usize>()
    }
}

pub fn subgroup_capacities(e: &EmbeddingSet, labels: &LabelTable, params: &SubgroupParams) -> Result<SubgroupReport> {
    if params.min_group_size < 2 {
        return Err(Error::domain("subgroup_capacities", "minimum group size must be at least 2"));
    }
    labels.validate_rows(e.rows())?;
    let categories = labels.attribute_groups(&params.attribute);
    if categories.is_empty() {
        return Err(Error::Labels(format!(
            "attribute {:?} is not present on any row",
            params.attribute
        )));
    }

    let mut skipped = Vec::new();
    let mut eligible = Vec::new();
    for (category, rows) in categories {
        if rows.len() < params.min_group_size {
            skipped.push(SkippedGroup {
                category: category.to_string(),
                member_count: rows.len(),
                reason: format!("{} members, fewer than the minimum of {}", rows.len(), params.min_group_size),
            });
        } else {
            eligible.push((category, rows));
        }
    }

    let groups = exec::map_ordered(&eligible, |(category, rows)| {
        let subset = e.subset(rows)?;
        let theta = estimate_population_angle(&subset, params.percentile, params.theta_convention, &params.histogram)?;
        let curve = capacity_curve(params.n, theta.angle, params.phi, &params.delta_cosines, params.delta_convention);
        Ok(GroupResult {
            category: category.to_string(),
            member_count: rows.len(),
            theta,
            curve,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    Ok(SubgroupReport {
        attribute: params.attribute.clone(),
        groups,
        skipped,
    })
}
