//! Two-sample t-tests, one-way ANOVA and Pearson correlation with exact
//! two-sided p-values built on the regularized incomplete beta function.

mod dist;
mod hypothesis;
mod special;

pub use dist::{f_cdf, f_upper_tail, t_cdf, t_two_sided_p};
pub use hypothesis::{
    anova_from_summary, correlation_matrix, one_way_anova, pearson, pearson_from_r, t_test_from_summary,
    t_test_pooled, t_test_welch, welch_from_summary, CorrelationIssue, CorrelationMatrix, Summary, TestKind,
    TestResult,
};
pub use special::{ln_beta, ln_gamma, regularized_incomplete_beta};
