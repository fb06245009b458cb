use std::collections::{BTreeMap, HashSet};

use crate::config::RECIPROCITY_REL_TOL;
use crate::error::{Error, Result};
use crate::scale::Judgment;

/// Upper-triangle judgments keyed by `(row, col)` with `row < col`.
pub type UpperJudgments<T> = BTreeMap<(usize, usize), T>;

/// A positive reciprocal pairwise comparison matrix over labeled items.
///
/// `entries[i][j]` is how strongly item `i` is preferred to item `j`;
/// the diagonal is one and `entries[j][i] == 1 / entries[i][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonMatrix {
    labels: Vec<String>,
    entries: Vec<Vec<f64>>,
}

impl ComparisonMatrix {
    /// Validates and wraps a full grid.
    pub fn new(labels: Vec<String>, entries: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Domain("a comparison matrix needs at least one item".into()));
        }
        check_labels(&labels)?;
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Schema(format!("expected a {n}x{n} grid")));
        }
        for (i, row) in entries.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(v.is_finite() && v > 0.0) {
                    return Err(Error::Domain(format!(
                        "entry ({}, {}) = {v} is not strictly positive and finite",
                        labels[i], labels[j]
                    )));
                }
            }
            if row[i] != 1.0 {
                return Err(Error::Domain(format!(
                    "diagonal entry for {} is {} (must be 1)",
                    labels[i], row[i]
                )));
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let p = entries[i][j] * entries[j][i];
                if (p - 1.0).abs() > RECIPROCITY_REL_TOL {
                    return Err(Error::Domain(format!(
                        "entries ({a}, {b}) and ({b}, {a}) are not reciprocal (product {p})",
                        a = labels[i],
                        b = labels[j]
                    )));
                }
            }
        }
        Ok(ComparisonMatrix { labels, entries })
    }

    /// Builds the consistent ratio matrix `w_i / w_j`.
    pub fn from_weights(labels: Vec<String>, weights: &[f64]) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::Schema("labels and weights differ in length".into()));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::Domain("ratio matrix weights must be positive".into()));
        }
        let n = weights.len();
        let mut entries = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                entries[i][j] = weights[i] / weights[j];
                entries[j][i] = 1.0 / entries[i][j];
            }
        }
        ComparisonMatrix::new(labels, entries)
    }

    /// Fills the lower triangle from exact rational reciprocals.
    pub fn from_judgments(labels: Vec<String>, upper: &UpperJudgments<Judgment>) -> Result<Self> {
        let n = labels.len();
        check_pairs(&labels, upper.keys())?;
        let mut entries = vec![vec![1.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = upper.get(&(i, j)).ok_or_else(|| missing(&labels, i, j))?;
                entries[i][j] = v.to_f64();
                entries[j][i] = v.recip().to_f64();
            }
        }
        ComparisonMatrix::new(labels, entries)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entries(&self) -> &[Vec<f64>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `M w` into `out`.
    pub(crate) fn mul_vec(&self, w: &[f64], out: &mut [f64]) {
        for (o, row) in out.iter_mut().zip(&self.entries) {
            *o = row.iter().zip(w).map(|(a, b)| a * b).sum();
        }
    }

    /// Principal submatrix over the given item indices, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> Result<Self> {
        if idx.iter().any(|&i| i >= self.order()) {
            return Err(Error::Domain("submatrix index out of range".into()));
        }
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let entries = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.entries[i][j]).collect())
            .collect();
        ComparisonMatrix::new(labels, entries)
    }
}

fn check_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::Schema(format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

fn check_pairs<'a>(labels: &[String], keys: impl Iterator<Item = &'a (usize, usize)>) -> Result<()> {
    let n = labels.len();
    for &(i, j) in keys {
        if i >= j || j >= n {
            return Err(Error::Schema(format!(
                "judgment key ({i}, {j}) is not an upper-triangle pair for {n} items"
            )));
        }
    }
    Ok(())
}

fn missing(labels: &[String], i: usize, j: usize) -> Error {
    Error::IncompleteJudgments { row: labels[i].clone(), col: labels[j].clone() }
}

/// Assembles a reciprocal matrix from upper-triangle judgments.
///
/// Every pair `(i, j)` with `i < j` must be present; the lower triangle is
/// filled with reciprocals and the diagonal with ones.
pub fn build_matrix(labels: &[&str], upper: &UpperJudgments<f64>) -> Result<ComparisonMatrix> {
    let labels: Vec<String> = labels.iter().map(|s| s.to_string()).collect();
    let n = labels.len();
    check_pairs(&labels, upper.keys())?;
    let mut entries = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = *upper.get(&(i, j)).ok_or_else(|| missing(&labels, i, j))?;
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!(
                    "judgment ({}, {}) = {v} must be strictly positive and finite",
                    labels[i], labels[j]
                )));
            }
            entries[i][j] = v;
            entries[j][i] = 1.0 / v;
        }
    }
    ComparisonMatrix::new(labels, entries)
}

/// True iff `|M_ij - M_ik M_kj| <= rel_tol * M_ij` for every triple.
pub fn is_cardinally_consistent(m: &ComparisonMatrix, rel_tol: f64) -> bool {
    let n = m.order();
    let e = m.entries();
    (0..n).all(|i| {
        (0..n).all(|j| (0..n).all(|k| (e[i][j] - e[i][k] * e[k][j]).abs() <= rel_tol * e[i][j]))
    })
}

/// The three items whose judgments disagree most with transitivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triad {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `|ln M_ik - ln(M_ij M_jk)|`
    pub deviation: f64,
}

impl Triad {
    pub fn indices(&self) -> [usize; 3] {
        [self.i, self.j, self.k]
    }

    /// Labels of the three items in index order.
    pub fn items<'a>(&self, m: &'a ComparisonMatrix) -> [&'a str; 3] {
        self.indices().map(|x| m.labels()[x].as_str())
    }
}

/// Scans every triad `i < j < k` for the largest log deviation from
/// `M_ik = M_ij M_jk`. The first maximal triad in lexicographic order wins.
///
/// For a reciprocal matrix the deviation of a triad does not depend on
/// which of its members is taken as the intermediate item.
pub fn most_inconsistent_triad(m: &ComparisonMatrix) -> Result<Triad> {
    let n = m.order();
    if n < 3 {
        return Err(Error::Domain(format!("triads need at least 3 items, got {n}")));
    }
    let e = m.entries();
    let mut best = Triad { i: 0, j: 1, k: 2, deviation: -1.0 };
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let dev = (e[i][k].ln() - (e[i][j] * e[j][k]).ln()).abs();
                if dev > best.deviation {
                    best = Triad { i, j, k, deviation: dev };
                }
            }
        }
    }
    Ok(best)
}
