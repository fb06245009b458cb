mod common;

use ahp_core::group::{
    aggregate_mean, partition, partition_custom, per_respondent_weights, Aggregate, AggregationPolicy,
    FacultyRank, PartitionBy,
};
use ahp_core::ingest::parse_responses_csv;
use ahp_core::stats::{pearson, t_test_pooled, t_test_welch, t_two_sided_p};
use ahp_core::WeightMethod;

fn dataset() -> ahp_core::group::StudyDataset {
    parse_responses_csv(include_bytes!("data/responses_small.csv")).unwrap()
}

#[test]
fn per_respondent_weights_keep_input_order() {
    let ds = dataset();
    let w = per_respondent_weights(&ds, WeightMethod::Rowsum);
    assert_eq!(w.records.len() + w.skipped.len(), ds.respondents().len());
    let ids: Vec<&str> = ds
        .respondents()
        .iter()
        .map(|r| r.id.as_str())
        .filter(|id| !w.skipped.iter().any(|s| s.id == *id))
        .collect();
    let got: Vec<&str> = w.records.iter().map(|r| r.id.as_str()).collect();
    assert_eq!(got, ids);
    assert!(w.skipped.iter().all(|s| s.reason == "answered 56 of 66 pairs"));
    for r in &w.records {
        assert!((r.weights.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn partitions_cover_every_record_once() {
    let w = per_respondent_weights(&dataset(), WeightMethod::Eigenvector);
    for by in [PartitionBy::Committee, PartitionBy::Rank, PartitionBy::ProgramGroup] {
        let groups = partition(&w.records, by);
        let mut seen: Vec<usize> = groups.iter().flat_map(|g| g.members.clone()).collect();
        seen.sort();
        assert_eq!(seen, (0..w.records.len()).collect::<Vec<_>>(), "{by}");
        for g in &groups {
            assert_eq!(g.samples.len(), 12);
            assert!(g.samples.iter().all(|s| s.len() == g.size()));
        }
    }
    let senior: &dyn Fn(&ahp_core::group::WeightRecord) -> bool = &|r| r.rank == FacultyRank::Full;
    let groups = partition_custom(&w.records, &[("full", senior)]);
    assert_eq!(groups.iter().map(|g| g.size()).sum::<usize>(), w.records.len());
    assert_eq!(groups[0].name, "full");
}

#[test]
fn aggregation_policies() {
    let ds = dataset();
    let tri = aggregate_mean(&ds, AggregationPolicy::TriangleReciprocal).unwrap();
    let geo = aggregate_mean(&ds, AggregationPolicy::Geometric).unwrap();
    let both = aggregate_mean(&ds, AggregationPolicy::MeanBothDirections).unwrap();
    assert!(matches!(tri, Aggregate::Reciprocal(_)));
    assert!(matches!(both, Aggregate::Unconstrained(_)));

    // oracle: arithmetic and geometric means of the Back vs Major column
    let vals: Vec<f64> = ds.respondents().iter().filter_map(|r| r.judgments.get(&(0, 1))).map(|j| j.to_f64()).collect();
    let mean = vals.iter().sum::<f64>() / vals.len() as f64;
    let gmean = (vals.iter().map(|v| v.ln()).sum::<f64>() / vals.len() as f64).exp();
    assert!((tri.entries()[0][1] - mean).abs() < 1e-12);
    assert!((geo.entries()[0][1] - gmean).abs() < 1e-12);
    // AM-GM: the geometric aggregate never exceeds the arithmetic one
    assert!(geo.entries()[0][1] <= tri.entries()[0][1] + 1e-15);
    let inv_mean = vals.iter().map(|v| 1.0 / v).sum::<f64>() / vals.len() as f64;
    assert!((both.entries()[1][0] - inv_mean).abs() < 1e-12);
    assert!(both.into_reciprocal().is_none());
}

#[test]
fn t_tests_against_hand_formulas() {
    let a = [0.061, 0.055, 0.049, 0.072, 0.058, 0.066];
    let b = [0.041, 0.052, 0.038, 0.047, 0.044];
    let ((ma, sa), (mb, sb)) = (common::mean_sd(&a), common::mean_sd(&b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let sp2 = ((na - 1.0) * sa * sa + (nb - 1.0) * sb * sb) / (na + nb - 2.0);
    let t = (ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt();
    let got = t_test_pooled(&a, &b).unwrap();
    assert!((got.statistic - t).abs() < 1e-12);
    assert_eq!(got.df.0, 9.0);
    let oracle_p = 2.0 * (1.0 - common::t_cdf_oracle(t.abs(), 9.0));
    assert!((got.p_value - oracle_p).abs() < 1e-9);

    let (va, vb) = (sa * sa / na, sb * sb / nb);
    let tw = (ma - mb) / (va + vb).sqrt();
    let dfw = (va + vb).powi(2) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    let w = t_test_welch(&a, &b).unwrap();
    assert!((w.statistic - tw).abs() < 1e-12);
    assert!((w.df.0 - dfw).abs() < 1e-10);
    assert!((w.p_value - t_two_sided_p(tw, dfw).unwrap()).abs() < 1e-15);
}

#[test]
fn pearson_hand_examples() {
    let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[2.0, 1.0, 4.0, 3.0]).unwrap();
    assert!((r.r.unwrap() - 0.6).abs() < 1e-12);
    let line = pearson(&[1.0, 2.0, 3.0, 4.0, 5.0], &[3.0, 5.0, 7.0, 9.0, 11.0]).unwrap();
    assert!((line.r.unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(line.p_value, 0.0);
    assert!(pearson(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
}
