use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::{POWER_LAMBDA_DELTA, POWER_MAX_ITERATIONS, POWER_RESIDUAL, WEIGHT_SUM_TOL};
use crate::error::{Error, Result};
use crate::matrix::ComparisonMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightMethod {
    Eigenvector,
    Rowsum,
    /// Global weights from hierarchy synthesis.
    Synthesized,
}

impl fmt::Display for WeightMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightMethod::Eigenvector => "eigenvector",
            WeightMethod::Rowsum => "rowsum",
            WeightMethod::Synthesized => "synthesized",
        })
    }
}

impl FromStr for WeightMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "eigenvector" | "eigen" => Ok(WeightMethod::Eigenvector),
            "rowsum" | "row-sum" => Ok(WeightMethod::Rowsum),
            "synthesized" => Ok(WeightMethod::Synthesized),
            other => Err(Error::Domain(format!("unknown weight method `{other}`"))),
        }
    }
}

/// Normalized priority weights, one per labeled item.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    labels: Vec<String>,
    weights: Vec<f64>,
    method: WeightMethod,
}

impl WeightVector {
    /// Takes already-normalized weights; they must be nonnegative and sum to 1.
    pub fn new(labels: Vec<String>, weights: Vec<f64>, method: WeightMethod) -> Result<Self> {
        if labels.len() != weights.len() {
            return Err(Error::Schema(format!(
                "{} labels but {} weights",
                labels.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Domain("weights must be nonnegative and finite".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Domain(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightVector { labels, weights, method })
    }

    /// Divides raw nonnegative scores by their total.
    pub fn from_unnormalized(labels: Vec<String>, raw: &[f64], method: WeightMethod) -> Result<Self> {
        if raw.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::Domain("raw scores must be nonnegative and finite".into()));
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::Domain("raw scores sum to zero".into()));
        }
        WeightVector::new(labels, raw.iter().map(|w| w / total).collect(), method)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn method(&self) -> WeightMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.labels.iter().position(|l| l == label).map(|i| self.weights[i])
    }
}

/// Dominant eigenvalue and L1-normalized Perron vector by power iteration.
///
/// Starts from the uniform vector, renormalizes each step and estimates
/// `lambda = |Mw|_1`. Stops once successive estimates agree to
/// `POWER_LAMBDA_DELTA` and `|Mw - lambda w|_1 / lambda < POWER_RESIDUAL`.
pub fn principal_eigenpair(m: &ComparisonMatrix) -> Result<(f64, WeightVector)> {
    let n = m.order();
    let mut w = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut lambda_prev = f64::INFINITY;
    let mut residual = f64::INFINITY;

    for _ in 0..POWER_MAX_ITERATIONS {
        m.mul_vec(&w, &mut y);
        let lambda: f64 = y.iter().sum();
        residual = y.iter().zip(&w).map(|(a, b)| (a - lambda * b).abs()).sum::<f64>() / lambda;
        let settled = (lambda - lambda_prev).abs() < POWER_LAMBDA_DELTA;
        for (wi, yi) in w.iter_mut().zip(&y) {
            *wi = yi / lambda;
        }
        if settled && residual < POWER_RESIDUAL {
            // w now carries one extra multiply; renormalize exactly to 1
            let total: f64 = w.iter().sum();
            w.iter_mut().for_each(|x| *x /= total);
            let wv = WeightVector::new(m.labels().to_vec(), w, WeightMethod::Eigenvector)?;
            return Ok((lambda, wv));
        }
        lambda_prev = lambda;
    }
    Err(Error::NonConvergence { iterations: POWER_MAX_ITERATIONS, residual })
}

/// Row totals divided by the grand total.
pub fn rowsum_weights(m: &ComparisonMatrix) -> WeightVector {
    let sums: Vec<f64> = m.entries().iter().map(|r| r.iter().sum()).collect();
    WeightVector::from_unnormalized(m.labels().to_vec(), &sums, WeightMethod::Rowsum)
        .expect("row sums of a positive matrix are positive")
}

/// Weights by the requested method.
pub fn derive_weights(m: &ComparisonMatrix, method: WeightMethod) -> Result<WeightVector> {
    match method {
        WeightMethod::Rowsum => Ok(rowsum_weights(m)),
        WeightMethod::Eigenvector => principal_eigenpair(m).map(|(_, w)| w),
        WeightMethod::Synthesized => {
            Err(Error::Domain("synthesized weights come from a hierarchy, not one matrix".into()))
        }
    }
}
