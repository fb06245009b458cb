use serde::{Deserialize, Serialize};

use crate::config::RANKING_SUM_TOL;
use crate::error::{Error, Result};
use crate::weights::WeightVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingRow {
    pub rank: usize,
    pub factor: String,
    pub weight: f64,
}

/// Items ordered by descending relative importance.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingTable {
    rows: Vec<RankingRow>,
}

impl RankingTable {
    /// Validates ordering, consecutive ranks and unit total within `sum_tol`.
    pub fn from_rows(rows: Vec<RankingRow>, sum_tol: f64) -> Result<Self> {
        for (k, r) in rows.iter().enumerate() {
            if r.rank != k + 1 {
                return Err(Error::Schema(format!("row {k} has rank {}, expected {}", r.rank, k + 1)));
            }
            if !(r.weight.is_finite() && r.weight >= 0.0) {
                return Err(Error::Domain(format!("weight for {} is {}", r.factor, r.weight)));
            }
        }
        if rows.windows(2).any(|w| w[0].weight < w[1].weight) {
            return Err(Error::Schema("rows are not sorted by descending weight".into()));
        }
        let total: f64 = rows.iter().map(|r| r.weight).sum();
        if !rows.is_empty() && (total - 1.0).abs() > sum_tol {
            return Err(Error::Domain(format!("importances sum to {total}, not 1")));
        }
        Ok(RankingTable { rows })
    }

    pub fn rows(&self) -> &[RankingRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn factors(&self) -> Vec<&str> {
        self.rows.iter().map(|r| r.factor.as_str()).collect()
    }
}

/// Sorts by descending weight; equal weights keep their input order.
pub fn rank_criteria(w: &WeightVector) -> RankingTable {
    let mut idx: Vec<usize> = (0..w.len()).collect();
    idx.sort_by(|&a, &b| w.weights()[b].total_cmp(&w.weights()[a]));
    let rows = idx
        .into_iter()
        .enumerate()
        .map(|(k, i)| RankingRow { rank: k + 1, factor: w.labels()[i].clone(), weight: w.weights()[i] })
        .collect();
    RankingTable::from_rows(rows, RANKING_SUM_TOL).expect("weight vectors sum to one")
}
