//! Acceptance gate. Runs without the test harness so every criterion prints
//! its `PASS`/`FAIL` line; the process fails if any criterion does.

mod common;

use std::time::{Duration, Instant};

use ahp_core::cli::{run, Cli};
use clap::Parser;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ahp_core::consistency::consistency_report;
use ahp_core::ingest::{
    parse_matrix_csv, parse_ranking_json, parse_responses_csv, write_matrix_csv, write_ranking_json,
    write_responses_csv,
};
use ahp_core::matrix::{is_cardinally_consistent, most_inconsistent_triad, ComparisonMatrix};
use ahp_core::simulate::{random_reciprocal_matrix, ri_table_with, SimulationConfig};
use ahp_core::stats::{
    anova_from_summary, one_way_anova, pearson_from_r, regularized_incomplete_beta, t_test_from_summary,
    t_test_pooled, Summary,
};
use ahp_core::{principal_eigenpair, rank_criteria, rowsum_weights, JudgmentScale};

fn verdict(name: &str, ok: bool, detail: &str) {
    println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let cli = Cli::try_parse_from(args).expect("arguments parse");
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(cli, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

// Committee-member ranking as published, percent.
const COMMITTEE_RANKING: [(&str, f64); 12] = [
    ("UDM", 13.202),
    ("MGPA", 12.108),
    ("Research", 10.447),
    ("Major", 8.647),
    ("GRES", 8.248),
    ("CGPA", 7.767),
    ("LDM", 7.466),
    ("Interview", 7.268),
    ("GREQ", 6.876),
    ("Tier", 6.572),
    ("Back", 6.131),
    ("GREV", 5.268),
];
const COMMITTEE_CR: f64 = 0.0045437;

fn committee_ranking_reproduction() -> bool {
    let path = fixture("committee_matrix.csv");
    let t0 = Instant::now();
    let (code, out, _) = run_cli(&["ahp", "rank", &path, "--method", "rowsum"]);
    let elapsed = t0.elapsed();
    assert_eq!(code, 0);
    let doc = parse_ranking_json(out.as_bytes()).unwrap();

    let mut misses = Vec::new();
    let mut worst: f64 = 0.0;
    for (factor, pct) in COMMITTEE_RANKING {
        let got = doc.ranking.rows().iter().find(|r| r.factor == factor).unwrap().weight * 100.0;
        let diff = (got - pct).abs();
        worst = worst.max(diff);
        if diff > 0.3 {
            misses.push(format!("{factor} {got:.3}% vs {pct}% (off {diff:.4}pp)"));
        }
    }
    let top5: Vec<&str> = doc.ranking.rows()[..5].iter().map(|r| r.factor.as_str()).collect();
    let want5: Vec<&str> = COMMITTEE_RANKING[..5].iter().map(|r| r.0).collect();
    let ok = misses.is_empty() && top5 == want5 && elapsed < Duration::from_secs(1);
    verdict(
        "committee ranking within 0.3pp, top-5 order, < 1 s",
        ok,
        &format!(
            "worst {worst:.4}pp; top5 {}; {:.0} ms; misses: [{}]",
            if top5 == want5 { "ok" } else { "differs" },
            elapsed.as_secs_f64() * 1e3,
            misses.join("; ")
        ),
    );
    ok
}

fn committee_consistency_ratio() -> bool {
    let path = fixture("committee_matrix.csv");
    let (code, out, err) = run_cli(&["ahp", "rank", &path]);
    assert_eq!(code, 0);
    let doc = parse_ranking_json(out.as_bytes()).unwrap();
    // full precision straight from the library for the audit line
    let m = parse_matrix_csv(std::fs::read(&path).unwrap().as_slice()).unwrap();
    let r = consistency_report(&m).unwrap();
    let diff = (r.cr - COMMITTEE_CR).abs();
    let ok = diff <= 0.002 && r.ri == 1.54 && r.consistent && doc.consistency.consistent && r.cr < 0.1;
    verdict(
        "committee CR within 0.002, RI(12)=1.54, consistent",
        ok,
        &format!("CR {:.7} (published {COMMITTEE_CR}, diff {diff:.2e}), lambda_max {:.10}", r.cr, r.lambda_max),
    );
    assert!(err.contains("lambda_max="), "audit line missing: {err}");
    ok
}

const PUBLISHED_RI: [(usize, f64); 8] =
    [(3, 0.52), (4, 0.89), (5, 1.11), (6, 1.25), (7, 1.35), (8, 1.40), (9, 1.45), (10, 1.49)];

fn random_index_monte_carlo() -> bool {
    let cfg = SimulationConfig { workers: Some(8), ..SimulationConfig::new(50_000, 20_191_105) };
    let t0 = Instant::now();
    let table = ri_table_with(10, &cfg).unwrap();
    let elapsed = t0.elapsed();

    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for (n, published) in PUBLISHED_RI {
        let est = table.iter().find(|e| e.order == n).unwrap();
        let d = (est.mean_ci - published).abs();
        worst = worst.max(d);
        lines.push(format!("{n}:{:.3}", est.mean_ci));
    }
    let single = ri_table_with(10, &SimulationConfig { workers: Some(1), ..cfg.clone() }).unwrap();
    let three = ri_table_with(10, &SimulationConfig { workers: Some(3), ..cfg.clone() }).unwrap();
    let same = |a: &[ahp_core::simulate::RiEstimate], b: &[ahp_core::simulate::RiEstimate]| {
        a.iter().zip(b).all(|(x, y)| x.mean_ci.to_bits() == y.mean_ci.to_bits() && x.std_error.to_bits() == y.std_error.to_bits())
    };
    let deterministic = same(&table, &single) && same(&table, &three);
    let ok = worst <= 0.06 && deterministic && elapsed < Duration::from_secs(60);
    verdict(
        "RI orders 3-10 within 0.06, bit-identical across 1/3/8 workers, < 60 s",
        ok,
        &format!("max diff {worst:.4}; [{}]; deterministic {deterministic}; {:.1} s", lines.join(" "), elapsed.as_secs_f64()),
    );
    ok
}

fn published_correlation_p_values() -> bool {
    let cases = [(-0.522, 5.8e-6, 1e-6), (0.441, 0.0002, 5e-5), (-0.352, 0.003, 5e-4)];
    let mut ok = true;
    let mut detail = Vec::new();
    for (r, p, tol) in cases {
        let got = pearson_from_r(r, 67).unwrap();
        ok &= (got.p_value - p).abs() <= tol && got.df.0 == 65.0;
        detail.push(format!("r={r}: p={:.3e}", got.p_value));
    }
    verdict("Pearson p-values at n=67", ok, &detail.join(", "));
    ok
}

fn summary_statistic_reconstructions() -> bool {
    let t = t_test_from_summary(Summary::new(49, 0.075, 0.020).unwrap(), Summary::new(39, 0.085, 0.024).unwrap()).unwrap();
    // background weight by faculty rank: full, associate, assistant
    let groups = [
        Summary::new(49, 0.0525, 0.030).unwrap(),
        Summary::new(12, 0.0475, 0.026).unwrap(),
        Summary::new(17, 0.0583, 0.026).unwrap(),
    ];
    let f = anova_from_summary(&groups).unwrap();
    let ok = (-2.40..=-1.95).contains(&t.statistic)
        && t.df.0 == 86.0
        && (0.3..=0.8).contains(&f.statistic)
        && f.df == (2.0, 75.0);
    verdict(
        "summary t in [-2.40,-1.95], summary F in [0.3,0.8] with df (2,75)",
        ok,
        &format!("t({})={:.4} p={:.4}; F{:?}={:.4} p={:.4}", t.df.0, t.statistic, t.p_value, f.df, f.statistic, f.p_value),
    );
    ok
}

fn random_weights(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..10.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / s).collect()
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i}")).collect()
}

fn property_suites() -> bool {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut failures = Vec::new();

    // consistent ratio matrices
    let (mut worst_gap, mut worst_cr, mut worst_w): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for k in 0..1000 {
        let n = 3 + k % 10;
        let w = random_weights(&mut rng, n);
        let m = ComparisonMatrix::from_weights(labels(n), &w).unwrap();
        let (lambda, ev) = principal_eigenpair(&m).unwrap();
        let rep = consistency_report(&m).unwrap();
        let rs = rowsum_weights(&m);
        worst_gap = worst_gap.max(lambda - n as f64);
        worst_cr = worst_cr.max(rep.cr);
        for i in 0..n {
            worst_w = worst_w.max((ev.weights()[i] - w[i]).abs()).max((rs.weights()[i] - w[i]).abs());
        }
    }
    if worst_gap > 1e-9 || worst_cr > 1e-9 || worst_w > 1e-9 {
        failures.push(format!("ratio matrices: gap {worst_gap:e}, CR {worst_cr:e}, weights {worst_w:e}"));
    }

    // random reciprocal matrices
    let scale = JudgmentScale::saaty();
    let mut below = 0;
    for k in 0..1000 {
        let n = 3 + k % 10;
        let m = random_reciprocal_matrix(n, &scale, &mut rng);
        let (lambda, _) = principal_eigenpair(&m).unwrap();
        if lambda < n as f64 - 1e-9 {
            below += 1;
        }
    }
    if below > 0 {
        failures.push(format!("{below} reciprocal matrices with lambda_max < n"));
    }

    // F = t^2 for two groups
    let mut worst_ft: f64 = 0.0;
    for _ in 0..200 {
        let a: Vec<f64> = (0..rng.gen_range(2..20)).map(|_| rng.gen_range(0.0..1.0)).collect();
        let b: Vec<f64> = (0..rng.gen_range(2..20)).map(|_| rng.gen_range(0.0..1.0)).collect();
        let t = t_test_pooled(&a, &b).unwrap();
        let f = one_way_anova(&[&a, &b]).unwrap();
        let rel = (f.statistic - t.statistic * t.statistic).abs() / f.statistic.max(1.0);
        worst_ft = worst_ft.max(rel).max((f.p_value - t.p_value).abs());
    }
    if worst_ft > 1e-10 {
        failures.push(format!("F vs t^2: {worst_ft:e}"));
    }

    // special functions against the quadrature oracle
    let mut worst_beta: f64 = 0.0;
    for (a, b, x) in common::beta_grid() {
        let d = (regularized_incomplete_beta(a, b, x).unwrap() - common::incomplete_beta_quadrature(a, b, x)).abs();
        worst_beta = worst_beta.max(d);
    }
    if worst_beta > 1e-9 {
        failures.push(format!("incomplete beta vs oracle: {worst_beta:e}"));
    }

    // round trips
    let mut trips_ok = true;
    for k in 0..100 {
        let n = 2 + k % 11;
        let m = random_reciprocal_matrix(n, &scale, &mut rng);
        trips_ok &= parse_matrix_csv(write_matrix_csv(&m).as_bytes()).unwrap() == m;
        let ranking = rank_criteria(&rowsum_weights(&m));
        let rep = consistency_report(&m).unwrap();
        let json = write_ranking_json(&ranking, &rep, ahp_core::WeightMethod::Rowsum);
        let doc = parse_ranking_json(json.as_bytes()).unwrap();
        trips_ok &= write_ranking_json(&doc.ranking, &doc.consistency, doc.method) == json;
    }
    let responses = std::fs::read(format!("{}/tests/data/responses_small.csv", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let ds = parse_responses_csv(&responses).unwrap();
    trips_ok &= parse_responses_csv(write_responses_csv(&ds).as_bytes()).unwrap() == ds;
    if !trips_ok {
        failures.push("a CSV/JSON round trip was not the identity".into());
    }

    let elapsed = t0.elapsed();
    if elapsed > Duration::from_secs(30) {
        failures.push(format!("took {:.1} s", elapsed.as_secs_f64()));
    }
    let ok = failures.is_empty();
    verdict(
        "property suites (ratio, reciprocal, F=t^2, special functions, round trips), < 30 s",
        ok,
        &format!(
            "gap {worst_gap:.1e}, CR {worst_cr:.1e}, weights {worst_w:.1e}, F-t^2 {worst_ft:.1e}, beta {worst_beta:.1e}, {:.1} s {}",
            elapsed.as_secs_f64(),
            failures.join("; ")
        ),
    );
    ok
}

fn candy_example_end_to_end() -> bool {
    let path = fixture("candy.csv");
    let m = parse_matrix_csv(std::fs::read(&path).unwrap().as_slice()).unwrap();
    let inconsistent = !is_cardinally_consistent(&m, 1e-9);
    let oracle = common::candy_lambda_max();
    let bisect = common::reciprocal3_lambda_max(m.get(0, 1), m.get(0, 2), m.get(1, 2));
    let rep = consistency_report(&m).unwrap();
    let triad = most_inconsistent_triad(&m).unwrap();
    let names: Vec<&str> = triad.items(&m).into_iter().collect();
    let (code, _, _) = run_cli(&["ahp", "rank", &path]);
    let ok = inconsistent
        && (oracle - bisect).abs() < 1e-12
        && (rep.lambda_max - oracle).abs() < 1e-9
        && rep.cr > 0.1
        && !rep.consistent
        && names == ["Lollipops", "Taffy", "Chocolate"]
        && code == 0;
    verdict(
        "candy matrix inconsistent, CR > 0.1, worst triad (Lollipops, Taffy, Chocolate)",
        ok,
        &format!("lambda_max {:.12} (oracle {oracle:.12}), CR {:.4}, triad {names:?}", rep.lambda_max, rep.cr),
    );
    ok
}

fn main() {
    let criteria: [(&str, fn() -> bool); 7] = [
        ("committee_ranking_reproduction", committee_ranking_reproduction),
        ("committee_consistency_ratio", committee_consistency_ratio),
        ("random_index_monte_carlo", random_index_monte_carlo),
        ("published_correlation_p_values", published_correlation_p_values),
        ("summary_statistic_reconstructions", summary_statistic_reconstructions),
        ("property_suites", property_suites),
        ("candy_example_end_to_end", candy_example_end_to_end),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match std::panic::catch_unwind(f) {
            Ok(true) => {}
            Ok(false) => failed += 1,
            Err(_) => {
                verdict(name, false, "panicked");
                failed += 1;
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
