//! Analytic Hierarchy Process engine.
//!
//! Builds positive reciprocal comparison matrices, derives priority weights
//! (principal eigenvector or row sums), measures judgment consistency,
//! aggregates survey respondents and runs the two-sample t / ANOVA /
//! Pearson battery over per-respondent weights.

pub mod cli;
pub mod config;
pub mod consistency;
pub mod error;
pub mod group;
pub mod hierarchy;
pub mod ingest;
pub mod matrix;
pub mod ranking;
pub mod scale;
pub mod service;
pub mod simulate;
pub mod stats;
pub mod weights;

pub use consistency::{consistency_report, consistency_report_with_ri, random_index_lookup, ConsistencyReport};
pub use error::{Error, Result};
pub use matrix::{build_matrix, is_cardinally_consistent, most_inconsistent_triad, ComparisonMatrix, Triad};
pub use ranking::{rank_criteria, RankingRow, RankingTable};
pub use scale::{Judgment, JudgmentScale};
pub use weights::{derive_weights, principal_eigenpair, rowsum_weights, WeightMethod, WeightVector};
