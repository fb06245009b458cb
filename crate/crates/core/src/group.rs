//! Respondent aggregation, per-respondent weights and metadata partitions.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ComparisonMatrix, UpperJudgments};
use crate::scale::Judgment;
use crate::weights::{derive_weights, WeightMethod, WeightVector};

/// Admission criteria in canonical order.
pub const STUDY_CRITERIA: [&str; 12] = [
    "Back", "Major", "CGPA", "MGPA", "Research", "Interview", "UDM", "LDM", "GREQ", "GREV", "GRES",
    "Tier",
];

macro_rules! text_enum {
    ($name:ident { $($variant:ident => $text:literal $(| $alias:literal)*),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(rename_all = "snake_case")]
        pub enum $name { $($variant),+ }

        impl $name {
            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                let t = s.trim().to_ascii_lowercase();
                $(if t == $text $(|| t == $alias)* { return Ok($name::$variant); })+
                Err(Error::Domain(format!(
                    concat!("`{}` is not a valid ", stringify!($name), " (expected one of: {})"),
                    s,
                    [$($text),+].join(", ")
                )))
            }
        }
    };
}

text_enum!(CommitteeService {
    Yes => "yes" | "y",
    No => "no" | "n",
    Blank => "blank" | "",
});

text_enum!(FacultyRank {
    Full => "full",
    Associate => "associate",
    Assistant => "assistant",
    VisitingAssistant => "visiting_assistant" | "visiting assistant",
    Lecturer => "lecturer" | "adjunct" | "instructor",
    Blank => "blank" | "",
});

text_enum!(ProgramGroup {
    One => "1",
    Two => "2",
    Three => "3",
    Blank => "blank" | "",
});

/// One survey response: metadata plus upper-triangle judgments (possibly partial).
#[derive(Debug, Clone, PartialEq)]
pub struct RespondentRecord {
    pub id: String,
    pub committee: CommitteeService,
    pub rank: FacultyRank,
    pub program_group: ProgramGroup,
    pub judgments: UpperJudgments<Judgment>,
}

impl RespondentRecord {
    pub fn is_complete(&self, n: usize) -> bool {
        self.judgments.len() == n * (n - 1) / 2
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyDataset {
    criteria: Vec<String>,
    respondents: Vec<RespondentRecord>,
}

impl StudyDataset {
    pub fn new(criteria: Vec<String>, respondents: Vec<RespondentRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(dup) = criteria.iter().find(|c| !seen.insert(c.as_str())) {
            return Err(Error::Schema(format!("duplicate criterion `{dup}`")));
        }
        let n = criteria.len();
        let mut ids = HashSet::new();
        for r in &respondents {
            if !ids.insert(r.id.as_str()) {
                return Err(Error::Schema(format!("duplicate respondent id `{}`", r.id)));
            }
            if let Some(&(i, j)) = r.judgments.keys().find(|&&(i, j)| i >= j || j >= n) {
                return Err(Error::Schema(format!(
                    "respondent `{}` has judgment key ({i}, {j}) outside the upper triangle",
                    r.id
                )));
            }
        }
        Ok(StudyDataset { criteria, respondents })
    }

    pub fn study(respondents: Vec<RespondentRecord>) -> Result<Self> {
        Self::new(STUDY_CRITERIA.iter().map(|s| s.to_string()).collect(), respondents)
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn respondents(&self) -> &[RespondentRecord] {
        &self.respondents
    }

    pub fn pair_count(&self) -> usize {
        let n = self.criteria.len();
        n * n.saturating_sub(1) / 2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AggregationPolicy {
    /// Arithmetic mean of each upper cell; lower cell is its reciprocal.
    #[default]
    TriangleReciprocal,
    /// Arithmetic mean of each direction separately; not reciprocal in general.
    MeanBothDirections,
    /// Geometric mean of each upper cell (reciprocal by construction).
    Geometric,
}

impl FromStr for AggregationPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "triangle" | "triangle_reciprocal" => Ok(Self::TriangleReciprocal),
            "both" | "mean_both_directions" => Ok(Self::MeanBothDirections),
            "geometric" => Ok(Self::Geometric),
            other => Err(Error::Domain(format!("unknown aggregation policy `{other}`"))),
        }
    }
}

/// Positive labeled grid without a reciprocity guarantee.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanGrid {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<f64>>,
}

/// Result of cell-mean aggregation.
#[derive(Debug, Clone, PartialEq)]
pub enum Aggregate {
    Reciprocal(ComparisonMatrix),
    Unconstrained(MeanGrid),
}

impl Aggregate {
    pub fn labels(&self) -> &[String] {
        match self {
            Aggregate::Reciprocal(m) => m.labels(),
            Aggregate::Unconstrained(g) => &g.labels,
        }
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        match self {
            Aggregate::Reciprocal(m) => m.entries(),
            Aggregate::Unconstrained(g) => &g.entries,
        }
    }

    pub fn into_reciprocal(self) -> Option<ComparisonMatrix> {
        match self {
            Aggregate::Reciprocal(m) => Some(m),
            Aggregate::Unconstrained(_) => None,
        }
    }
}

/// Cell-by-cell mean over every respondent who answered that pair.
///
/// Partial respondents still contribute the pairs they answered.
pub fn aggregate_mean(ds: &StudyDataset, policy: AggregationPolicy) -> Result<Aggregate> {
    let n = ds.criteria.len();
    let labels = ds.criteria.clone();
    let mut entries = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let vals: Vec<Judgment> = ds
                .respondents
                .iter()
                .filter_map(|r| r.judgments.get(&(i, j)).copied())
                .collect();
            if vals.is_empty() {
                return Err(Error::Coverage { row: labels[i].clone(), col: labels[j].clone() });
            }
            let count = vals.len() as f64;
            match policy {
                AggregationPolicy::TriangleReciprocal => {
                    entries[i][j] = vals.iter().map(Judgment::to_f64).sum::<f64>() / count;
                    entries[j][i] = 1.0 / entries[i][j];
                }
                AggregationPolicy::MeanBothDirections => {
                    entries[i][j] = vals.iter().map(Judgment::to_f64).sum::<f64>() / count;
                    entries[j][i] = vals.iter().map(|v| v.recip().to_f64()).sum::<f64>() / count;
                }
                AggregationPolicy::Geometric => {
                    let mean_log = vals.iter().map(|v| v.to_f64().ln()).sum::<f64>() / count;
                    entries[i][j] = mean_log.exp();
                    entries[j][i] = 1.0 / entries[i][j];
                }
            }
        }
    }
    match policy {
        AggregationPolicy::MeanBothDirections => Ok(Aggregate::Unconstrained(MeanGrid { labels, entries })),
        _ => ComparisonMatrix::new(labels, entries).map(Aggregate::Reciprocal),
    }
}

/// Weights derived from one respondent's full matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightRecord {
    pub id: String,
    pub committee: CommitteeService,
    pub rank: FacultyRank,
    pub program_group: ProgramGroup,
    pub weights: WeightVector,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedRespondent {
    pub id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RespondentWeights {
    pub records: Vec<WeightRecord>,
    pub skipped: Vec<SkippedRespondent>,
}

/// Runs the weight derivation on every complete respondent, in input order.
pub fn per_respondent_weights(ds: &StudyDataset, method: WeightMethod) -> RespondentWeights {
    let n = ds.criteria.len();
    let outcomes: Vec<std::result::Result<WeightRecord, SkippedRespondent>> = ds
        .respondents
        .par_iter()
        .map(|r| {
            let skip = |reason: String| SkippedRespondent { id: r.id.clone(), reason };
            if !r.is_complete(n) {
                return Err(skip(format!(
                    "answered {} of {} pairs",
                    r.judgments.len(),
                    ds.pair_count()
                )));
            }
            let m = ComparisonMatrix::from_judgments(ds.criteria.clone(), &r.judgments)
                .map_err(|e| skip(e.to_string()))?;
            let weights = derive_weights(&m, method).map_err(|e| skip(e.to_string()))?;
            Ok(WeightRecord {
                id: r.id.clone(),
                committee: r.committee,
                rank: r.rank,
                program_group: r.program_group,
                weights,
            })
        })
        .collect();
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => records.push(r),
            Err(s) => skipped.push(s),
        }
    }
    RespondentWeights { records, skipped }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionBy {
    Committee,
    Rank,
    ProgramGroup,
}

impl FromStr for PartitionBy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "committee" | "committee_service" => Ok(Self::Committee),
            "rank" => Ok(Self::Rank),
            "group" | "program_group" => Ok(Self::ProgramGroup),
            other => Err(Error::Domain(format!("unknown partition `{other}`"))),
        }
    }
}

impl fmt::Display for PartitionBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionBy::Committee => "committee",
            PartitionBy::Rank => "rank",
            PartitionBy::ProgramGroup => "program_group",
        })
    }
}

/// One partition cell: member indices and per-criterion weight samples.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub name: String,
    pub members: Vec<usize>,
    /// `samples[c]` are the members' weights for criterion `c`.
    pub samples: Vec<Vec<f64>>,
}

impl Group {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_blank(&self) -> bool {
        self.name == "blank"
    }
}

/// Groups item indices by key, ordered by key. Every index lands in exactly one group.
pub fn partition_by_key<T, K: Ord>(items: &[T], key: impl Fn(&T) -> K) -> BTreeMap<K, Vec<usize>> {
    let mut out: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for (i, it) in items.iter().enumerate() {
        out.entry(key(it)).or_default().push(i);
    }
    out
}

fn build_groups(records: &[WeightRecord], cells: Vec<(String, Vec<usize>)>) -> Vec<Group> {
    let n_criteria = records.first().map_or(0, |r| r.weights.len());
    cells
        .into_iter()
        .filter(|(_, m)| !m.is_empty())
        .map(|(name, members)| {
            let samples = (0..n_criteria)
                .map(|c| members.iter().map(|&i| records[i].weights.weights()[c]).collect())
                .collect();
            Group { name, members, samples }
        })
        .collect()
}

/// Splits weight records by a metadata field; blanks form their own group.
pub fn partition(records: &[WeightRecord], by: PartitionBy) -> Vec<Group> {
    let cells: Vec<(String, Vec<usize>)> = match by {
        PartitionBy::Committee => partition_by_key(records, |r| r.committee)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        PartitionBy::Rank => partition_by_key(records, |r| r.rank)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
        PartitionBy::ProgramGroup => partition_by_key(records, |r| r.program_group)
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect(),
    };
    build_groups(records, cells)
}

/// A named membership test for custom partitions.
pub type Predicate<'a> = (&'a str, &'a dyn Fn(&WeightRecord) -> bool);

/// Splits records by the first predicate they satisfy; the rest form `other`.
pub fn partition_custom(records: &[WeightRecord], predicates: &[Predicate<'_>]) -> Vec<Group> {
    let mut cells: Vec<(String, Vec<usize>)> =
        predicates.iter().map(|(name, _)| (name.to_string(), Vec::new())).collect();
    let mut other = Vec::new();
    for (i, r) in records.iter().enumerate() {
        match predicates.iter().position(|(_, p)| p(r)) {
            Some(k) => cells[k].1.push(i),
            None => other.push(i),
        }
    }
    cells.push(("other".to_string(), other));
    build_groups(records, cells)
}
