//! Numeric tolerances used across the crate.

/// Relative tolerance for `m[i][j] * m[j][i] == 1`.
pub const RECIPROCITY_REL_TOL: f64 = 1e-12;

/// Weight vectors must sum to one within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Ranking tables must sum to one within this.
pub const RANKING_SUM_TOL: f64 = 1e-9;

/// Stop when successive eigenvalue estimates differ by less than this...
pub const POWER_LAMBDA_DELTA: f64 = 1e-13;

/// ...and the relative residual `|Mw - lw|_1 / l` is below this.
pub const POWER_RESIDUAL: f64 = 1e-12;

pub const POWER_MAX_ITERATIONS: usize = 100_000;

/// Saaty's acceptability threshold: consistent iff CR < 0.1.
pub const CR_THRESHOLD: f64 = 0.1;

/// Published tables are rounded to three decimals, so parsed matrices only
/// need to be reciprocal to this relative tolerance before re-symmetrizing.
pub const CSV_RECIPROCITY_TOL: f64 = 5e-3;

/// Decimal inputs such as `0.333` snap to a scale value within this.
pub const SCALE_SNAP_TOL: f64 = 5e-4;

/// Default Monte Carlo sample count per order.
pub const DEFAULT_RI_SAMPLES: usize = 50_000;

/// Default seed when neither a flag nor `AHP_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_191_105;
