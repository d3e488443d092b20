use facecap::capacity::{Angle, AngleConvention};
use facecap::demographics::*;
use facecap::empirical::{estimate_population_angle, LabelRecord};
use facecap::oracle::{sample_uniform_sphere, synthesize_identities, SamplerConfig, SynthConfig};
use facecap::{EmbeddingSet, HistogramConfig, LabelTable};

fn params(percentile: f64) -> SubgroupParams {
    SubgroupParams {
        attribute: "group".into(),
        phi: Angle::new(0.5).unwrap(),
        delta_cosines: vec![0.0, 0.3, 0.6, 0.9],
        n: 32,
        percentile,
        theta_convention: AngleConvention::Half,
        delta_convention: AngleConvention::Full,
        min_group_size: 10,
        histogram: HistogramConfig::default(),
    }
}

fn labelled(cats: &[&str]) -> LabelTable {
    let mut t = LabelTable::new();
    for (row, c) in cats.iter().enumerate() {
        let mut rec = LabelRecord::default();
        rec.attributes.insert("group".into(), c.to_string());
        t.insert(row, rec).unwrap();
    }
    t
}

fn capacities(g: &GroupResult) -> Vec<f64> {
    g.curve.iter().map(|p| p.estimate.as_ref().unwrap().capacity.unwrap()).collect()
}

fn dataset() -> (EmbeddingSet, LabelTable) {
    synthesize_identities(&SynthConfig { identities: 60, per_identity: 6, kappa: 40.0, dim: 32, seed: 12, groups: 3 }).unwrap()
}

#[test]
fn single_category_equals_full_dataset() {
    let e = sample_uniform_sphere(&SamplerConfig::new(32, 2, 300).unwrap()).unwrap();
    let labels = labelled(&vec!["all"; 300]);
    let p = params(5.0);
    let report = subgroup_capacities(&e, &labels, &p).unwrap();
    assert_eq!(report.groups.len(), 1);
    let full = estimate_population_angle(&e, 5.0, AngleConvention::Half, &p.histogram).unwrap();
    assert_eq!(report.groups[0].theta, full);
}

#[test]
fn mirror_copies_have_equal_capacities() {
    let e = sample_uniform_sphere(&SamplerConfig::new(32, 3, 150).unwrap()).unwrap();
    let mut data = e.data().to_vec();
    data.extend_from_slice(e.data());
    let doubled = EmbeddingSet::from_unit_rows(300, 32, data).unwrap();
    let cats: Vec<&str> = (0..300).map(|r| if r < 150 { "a" } else { "b" }).collect();
    let report = subgroup_capacities(&doubled, &labelled(&cats), &params(5.0)).unwrap();
    assert_eq!(capacities(&report.groups[0]), capacities(&report.groups[1]));
}

#[test]
fn removing_a_category_leaves_others_unchanged() {
    let (e, labels) = dataset();
    let p = params(5.0);
    let full = subgroup_capacities(&e, &labels, &p).unwrap();
    let keep: Vec<usize> = (0..e.rows())
        .filter(|&r| labels.get(r).unwrap().attributes["group"] != "g1")
        .collect();
    let mut reduced_labels = LabelTable::new();
    for (new, &old) in keep.iter().enumerate() {
        reduced_labels.insert(new, labels.get(old).unwrap().clone()).unwrap();
    }
    let reduced = subgroup_capacities(&e.subset(&keep).unwrap(), &reduced_labels, &p).unwrap();
    assert_eq!(reduced.groups.len(), 2);
    for g in &reduced.groups {
        let same = full.groups.iter().find(|f| f.category == g.category).unwrap();
        assert_eq!(g.theta, same.theta);
        assert_eq!(capacities(g), capacities(same));
    }
}

#[test]
fn independent_of_row_and_processing_order() {
    let (e, labels) = dataset();
    let p = params(5.0);
    let base = subgroup_capacities(&e, &labels, &p).unwrap();
    let order: Vec<usize> = (0..e.rows()).rev().collect();
    let mut rev_labels = LabelTable::new();
    for (new, &old) in order.iter().enumerate() {
        rev_labels.insert(new, labels.get(old).unwrap().clone()).unwrap();
    }
    let rev = subgroup_capacities(&e.subset(&order).unwrap(), &rev_labels, &p).unwrap();
    let names = |r: &SubgroupReport| r.groups.iter().map(|g| g.category.clone()).collect::<Vec<_>>();
    assert_eq!(names(&base), vec!["g0", "g1", "g2"]);
    assert_eq!(names(&base), names(&rev));
    for (a, b) in base.groups.iter().zip(&rev.groups) {
        assert_eq!(a.theta, b.theta);
        assert_eq!(capacities(a), capacities(b));
    }
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let seq = single.install(|| subgroup_capacities(&e, &labels, &p).unwrap());
    for (a, b) in base.groups.iter().zip(&seq.groups) {
        assert_eq!(capacities(a), capacities(b));
    }
}

#[test]
fn minimum_score_threshold_bounded_by_population() {
    // at the lowest rank the group tail is a subset of the population tail
    let (e, labels) = dataset();
    let rank_one = 1e-9;
    let report = subgroup_capacities(&e, &labels, &params(rank_one)).unwrap();
    let cfg = HistogramConfig::default();
    let full = estimate_population_angle(&e, rank_one, AngleConvention::Half, &cfg).unwrap();
    let width = 2.0 / cfg.bins as f64;
    for g in &report.groups {
        assert!(g.theta.threshold >= full.threshold - width);
        assert!(g.theta.angle.radians() <= full.angle.radians() + 1e-12);
    }
}

#[test]
fn small_groups_and_missing_attribute() {
    let e = sample_uniform_sphere(&SamplerConfig::new(8, 1, 40).unwrap()).unwrap();
    let cats: Vec<&str> = (0..40).map(|r| if r == 0 { "tiny" } else { "big" }).collect();
    let labels = labelled(&cats);
    let report = subgroup_capacities(&e, &labels, &params(5.0)).unwrap();
    assert_eq!(report.skipped.len(), 1);
    assert_eq!(report.skipped[0].category, "tiny");
    assert_eq!(report.skipped[0].member_count, 1);
    assert_eq!(report.labelled_rows(), 40);
    let mut p = params(5.0);
    p.attribute = "age".into();
    assert!(matches!(subgroup_capacities(&e, &labels, &p), Err(facecap::Error::Labels(_))));
}
