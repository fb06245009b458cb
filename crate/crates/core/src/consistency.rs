//! Consistency index, random index and consistency ratio.
//!
//! CI is computed in closed form as `(lambda_max - n) / (n - 1)`. Since the
//! eigenvalues of `M` sum to its trace `n`, this equals minus the mean of the
//! non-principal eigenvalues.

use serde::{Deserialize, Serialize};

use crate::config::CR_THRESHOLD;
use crate::error::{Error, Result};
use crate::matrix::ComparisonMatrix;
use crate::weights::principal_eigenpair;

/// Saaty–Tran random index for orders 1 through 15.
pub const RANDOM_INDEX: [f64; 15] = [
    0.0, 0.0, 0.52, 0.89, 1.11, 1.25, 1.35, 1.40, 1.45, 1.49, 1.52, 1.54, 1.56, 1.58, 1.59,
];

pub fn random_index_lookup(n: usize) -> Result<f64> {
    if (1..=RANDOM_INDEX.len()).contains(&n) {
        Ok(RANDOM_INDEX[n - 1])
    } else {
        Err(Error::UnsupportedOrder(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub order: usize,
    pub lambda_max: f64,
    pub ci: f64,
    pub ri: f64,
    pub cr: f64,
    pub consistent: bool,
}

impl ConsistencyReport {
    /// Assembles a report from an eigenvalue; CI and CR are zero for n <= 2.
    pub fn from_lambda(order: usize, lambda_max: f64, ri: f64) -> Self {
        let ci = if order <= 2 { 0.0 } else { (lambda_max - order as f64) / (order as f64 - 1.0) };
        let cr = if order <= 2 || ri <= 0.0 { 0.0 } else { ci / ri };
        ConsistencyReport { order, lambda_max, ci, ri, cr, consistent: cr < CR_THRESHOLD }
    }
}

/// CR using the tabulated random index for the matrix order.
pub fn consistency_report(m: &ComparisonMatrix) -> Result<ConsistencyReport> {
    let ri = random_index_lookup(m.order())?;
    consistency_report_with_ri(m, ri)
}

/// CR using a caller-supplied random index (e.g. for orders above 15).
pub fn consistency_report_with_ri(m: &ComparisonMatrix, ri: f64) -> Result<ConsistencyReport> {
    if !(ri.is_finite() && ri >= 0.0) {
        return Err(Error::Domain(format!("random index {ri} must be nonnegative")));
    }
    let (lambda, _) = principal_eigenpair(m)?;
    Ok(ConsistencyReport::from_lambda(m.order(), lambda, ri))
}
