//! JSON reports and the random-index CSV.
//!
//! Numbers are written with six significant digits; key order follows
//! struct field order.

use serde::{Deserialize, Serialize, Serializer};

use crate::consistency::ConsistencyReport;
use crate::error::{Error, Result};
use crate::group::SkippedRespondent;
use crate::ranking::{RankingRow, RankingTable};
use crate::simulate::RiEstimate;
use crate::stats::{TestKind, TestResult};
use crate::weights::WeightMethod;

/// Rounds to six significant digits.
pub fn sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().expect("formatted float parses")
}

fn ser6<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(sig6(*x))
    } else {
        s.serialize_none()
    }
}

fn ser6_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => ser6(v, s),
        None => s.serialize_none(),
    }
}

fn ser6_pair<S: Serializer>(x: &(f64, f64), s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&sig6(x.0))?;
    t.serialize_element(&sig6(x.1))?;
    t.end()
}

#[derive(Serialize, Deserialize)]
struct RowOut {
    rank: usize,
    factor: String,
    #[serde(serialize_with = "ser6")]
    weight: f64,
}

#[derive(Serialize, Deserialize)]
struct ConsistencyOut {
    order: usize,
    #[serde(serialize_with = "ser6")]
    lambda_max: f64,
    #[serde(serialize_with = "ser6")]
    ci: f64,
    #[serde(serialize_with = "ser6")]
    ri: f64,
    #[serde(serialize_with = "ser6")]
    cr: f64,
    consistent: bool,
}

#[derive(Serialize, Deserialize)]
struct RankingOut {
    method: WeightMethod,
    ranking: Vec<RowOut>,
    consistency: ConsistencyOut,
}

/// A parsed ranking report.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingDocument {
    pub method: WeightMethod,
    pub ranking: RankingTable,
    pub consistency: ConsistencyReport,
}

pub fn write_ranking_json(rt: &RankingTable, cr: &ConsistencyReport, method: WeightMethod) -> String {
    let doc = RankingOut {
        method,
        ranking: rt
            .rows()
            .iter()
            .map(|r| RowOut { rank: r.rank, factor: r.factor.clone(), weight: r.weight })
            .collect(),
        consistency: ConsistencyOut {
            order: cr.order,
            lambda_max: cr.lambda_max,
            ci: cr.ci,
            ri: cr.ri,
            cr: cr.cr,
            consistent: cr.consistent,
        },
    };
    serde_json::to_string_pretty(&doc).expect("report serializes")
}

/// Reads a ranking report back. Weights carry six significant digits, so the
/// unit-sum check is relaxed to match.
pub fn parse_ranking_json(bytes: &[u8]) -> Result<RankingDocument> {
    let doc: RankingOut = serde_json::from_slice(bytes).map_err(|e| Error::parse(e.line(), e.column(), e.to_string()))?;
    let rows = doc
        .ranking
        .into_iter()
        .map(|r| RankingRow { rank: r.rank, factor: r.factor, weight: r.weight })
        .collect();
    let ranking = RankingTable::from_rows(rows, 1e-5).map_err(|e| Error::parse(0, 0, e.to_string()))?;
    let c = doc.consistency;
    Ok(RankingDocument {
        method: doc.method,
        ranking,
        consistency: ConsistencyReport {
            order: c.order,
            lambda_max: c.lambda_max,
            ci: c.ci,
            ri: c.ri,
            cr: c.cr,
            consistent: c.consistent,
        },
    })
}

/// One test in a stats report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsEntry {
    /// Criterion (or `A~B` criterion pair for correlations).
    pub criterion: String,
    pub groups: Vec<String>,
    pub group_sizes: Vec<usize>,
    pub kind: TestKind,
    #[serde(serialize_with = "ser6")]
    pub statistic: f64,
    #[serde(serialize_with = "ser6_pair")]
    pub df: (f64, f64),
    #[serde(serialize_with = "ser6")]
    pub p_value: f64,
    #[serde(serialize_with = "ser6_opt", skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    pub degenerate: bool,
}

impl StatsEntry {
    pub fn new(criterion: impl Into<String>, groups: Vec<String>, group_sizes: Vec<usize>, t: &TestResult) -> Self {
        StatsEntry {
            criterion: criterion.into(),
            groups,
            group_sizes,
            kind: t.kind,
            statistic: t.statistic,
            df: t.df,
            p_value: t.p_value,
            r: t.r,
            degenerate: t.degenerate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StatsReport {
    pub tests: Vec<StatsEntry>,
    pub test_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<WeightMethod>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<SkippedRespondent>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl StatsReport {
    pub fn push(&mut self, e: StatsEntry) {
        self.tests.push(e);
        self.test_count = self.tests.len();
    }
}

pub fn write_stats_report_json(report: &StatsReport) -> String {
    serde_json::to_string(report).expect("report serializes")
}

/// `order,ri,std_error,samples,seed`
pub fn write_ri_csv(rows: &[RiEstimate]) -> String {
    let mut out = String::from("order,ri,std_error,samples,seed\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{},{}\n", r.order, sig6(r.mean_ci), sig6(r.std_error), r.samples, r.seed));
    }
    out
}
