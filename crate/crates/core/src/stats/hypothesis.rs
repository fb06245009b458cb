use serde::{Deserialize, Serialize};

use super::dist::{f_upper_tail, t_two_sided_p};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    TPooled,
    TWelch,
    AnovaF,
    PearsonR,
}

/// Outcome of one hypothesis test. All p-values are two-sided
/// (upper tail for F).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub kind: TestKind,
    pub statistic: f64,
    /// `(df, 0)` for t and r tests, `(between, within)` for ANOVA.
    pub df: (f64, f64),
    pub p_value: f64,
    /// Correlation coefficient, for Pearson tests.
    pub r: Option<f64>,
    /// Set when a zero variance makes the statistic infinite or undefined.
    pub degenerate: bool,
}

/// Sample size, mean and (n - 1) standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

impl Summary {
    pub fn new(n: usize, mean: f64, sd: f64) -> Result<Self> {
        if !(mean.is_finite() && sd.is_finite() && sd >= 0.0) {
            return Err(Error::Domain(format!("invalid summary (mean {mean}, sd {sd})")));
        }
        Ok(Summary { n, mean, sd })
    }

    pub fn of(sample: &[f64]) -> Result<Self> {
        if sample.iter().any(|x| !x.is_finite()) {
            return Err(Error::Domain("sample contains non-finite values".into()));
        }
        let n = sample.len();
        if n == 0 {
            return Err(Error::Domain("empty sample".into()));
        }
        let mean = sample.iter().sum::<f64>() / n as f64;
        let sd = if n > 1 {
            (sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Ok(Summary { n, mean, sd })
    }

    fn var(&self) -> f64 {
        self.sd * self.sd
    }
}

fn need_two(s: &Summary) -> Result<()> {
    if s.n < 2 {
        Err(Error::Domain(format!("t-test samples need at least 2 observations (got {})", s.n)))
    } else {
        Ok(())
    }
}

fn t_result(kind: TestKind, diff: f64, se: f64, df: f64) -> Result<TestResult> {
    if se == 0.0 {
        let (statistic, p_value, degenerate) = if diff == 0.0 {
            (0.0, 1.0, false)
        } else {
            (diff.signum() * f64::INFINITY, 0.0, true)
        };
        return Ok(TestResult { kind, statistic, df: (df, 0.0), p_value, r: None, degenerate });
    }
    let t = diff / se;
    Ok(TestResult { kind, statistic: t, df: (df, 0.0), p_value: t_two_sided_p(t, df)?, r: None, degenerate: false })
}

/// Student's t with pooled variance, `df = n1 + n2 - 2`.
pub fn t_test_from_summary(a: Summary, b: Summary) -> Result<TestResult> {
    need_two(&a)?;
    need_two(&b)?;
    let (n1, n2) = (a.n as f64, b.n as f64);
    let df = n1 + n2 - 2.0;
    let sp2 = ((n1 - 1.0) * a.var() + (n2 - 1.0) * b.var()) / df;
    let se = (sp2 * (1.0 / n1 + 1.0 / n2)).sqrt();
    t_result(TestKind::TPooled, a.mean - b.mean, se, df)
}

/// Welch's t with Satterthwaite degrees of freedom.
pub fn welch_from_summary(a: Summary, b: Summary) -> Result<TestResult> {
    need_two(&a)?;
    need_two(&b)?;
    let (n1, n2) = (a.n as f64, b.n as f64);
    let (q1, q2) = (a.var() / n1, b.var() / n2);
    let se2 = q1 + q2;
    let df = if se2 == 0.0 {
        n1 + n2 - 2.0
    } else {
        se2 * se2 / (q1 * q1 / (n1 - 1.0) + q2 * q2 / (n2 - 1.0))
    };
    t_result(TestKind::TWelch, a.mean - b.mean, se2.sqrt(), df)
}

pub fn t_test_pooled(a: &[f64], b: &[f64]) -> Result<TestResult> {
    t_test_from_summary(Summary::of(a)?, Summary::of(b)?)
}

pub fn t_test_welch(a: &[f64], b: &[f64]) -> Result<TestResult> {
    welch_from_summary(Summary::of(a)?, Summary::of(b)?)
}

/// One-way ANOVA from group summaries.
pub fn anova_from_summary(groups: &[Summary]) -> Result<TestResult> {
    let k = groups.len();
    if k < 2 {
        return Err(Error::Domain(format!("ANOVA needs at least 2 groups (got {k})")));
    }
    if groups.iter().any(|g| g.n == 0) {
        return Err(Error::Domain("ANOVA groups must be nonempty".into()));
    }
    let total: usize = groups.iter().map(|g| g.n).sum();
    if total <= k {
        return Err(Error::Domain(format!("ANOVA needs more observations ({total}) than groups ({k})")));
    }
    let grand = groups.iter().map(|g| g.n as f64 * g.mean).sum::<f64>() / total as f64;
    let ss_between: f64 = groups.iter().map(|g| g.n as f64 * (g.mean - grand).powi(2)).sum();
    let ss_within: f64 = groups.iter().map(|g| (g.n as f64 - 1.0) * g.var()).sum();
    let df = ((k - 1) as f64, (total - k) as f64);
    // sums of squares below this are rounding noise in the group means
    let floor = 1e-20 * groups.iter().map(|g| g.n as f64 * g.mean * g.mean).sum::<f64>();
    if ss_within <= floor {
        let (statistic, p_value) = if ss_between <= floor { (0.0, 1.0) } else { (f64::INFINITY, 0.0) };
        return Ok(TestResult { kind: TestKind::AnovaF, statistic, df, p_value, r: None, degenerate: true });
    }
    let f = (ss_between / df.0) / (ss_within / df.1);
    Ok(TestResult {
        kind: TestKind::AnovaF,
        statistic: f,
        df,
        p_value: f_upper_tail(f, df.0, df.1)?,
        r: None,
        degenerate: false,
    })
}

pub fn one_way_anova(groups: &[&[f64]]) -> Result<TestResult> {
    let summaries = groups.iter().map(|g| Summary::of(g)).collect::<Result<Vec<_>>>()?;
    anova_from_summary(&summaries)
}

/// Significance of a correlation coefficient observed over `n` pairs.
pub fn pearson_from_r(r: f64, n: usize) -> Result<TestResult> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("correlation {r} outside [-1, 1]")));
    }
    if n < 3 {
        return Err(Error::Domain(format!("correlation test needs n >= 3 (got {n})")));
    }
    let df = (n - 2) as f64;
    let one_minus = 1.0 - r * r;
    if one_minus <= 0.0 {
        return Ok(TestResult {
            kind: TestKind::PearsonR,
            statistic: r.signum() * f64::INFINITY,
            df: (df, 0.0),
            p_value: 0.0,
            r: Some(r),
            degenerate: true,
        });
    }
    let t = r * (df / one_minus).sqrt();
    Ok(TestResult {
        kind: TestKind::PearsonR,
        statistic: t,
        df: (df, 0.0),
        p_value: t_two_sided_p(t, df)?,
        r: Some(r),
        degenerate: false,
    })
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<TestResult> {
    if x.len() != y.len() {
        return Err(Error::Domain(format!("samples differ in length ({} vs {})", x.len(), y.len())));
    }
    let n = x.len();
    if n < 3 {
        return Err(Error::Domain(format!("correlation test needs n >= 3 (got {n})")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Domain("samples contain non-finite values".into()));
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("a sample has zero variance".into()));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    pearson_from_r(r, n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationIssue {
    pub row: usize,
    pub col: usize,
    pub reason: String,
}

/// Pairwise Pearson coefficients and p-values. The diagonal is 1 in both
/// grids; cells whose test fails are `None` with an entry in `issues`.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub labels: Vec<String>,
    pub r: Vec<Vec<Option<f64>>>,
    pub p: Vec<Vec<Option<f64>>>,
    pub tests: Vec<Vec<Option<TestResult>>>,
    pub issues: Vec<CorrelationIssue>,
}

pub fn correlation_matrix(labels: &[String], samples: &[Vec<f64>]) -> Result<CorrelationMatrix> {
    let k = samples.len();
    if labels.len() != k {
        return Err(Error::Schema(format!("{} labels for {k} samples", labels.len())));
    }
    let n = samples.first().map_or(0, Vec::len);
    if samples.iter().any(|s| s.len() != n) {
        return Err(Error::Domain("all samples must have the same length".into()));
    }
    if n < 3 {
        return Err(Error::Domain(format!("correlation matrix needs n >= 3 (got {n})")));
    }
    let mut r = vec![vec![None; k]; k];
    let mut p = vec![vec![None; k]; k];
    let mut tests = vec![vec![None; k]; k];
    let mut issues = Vec::new();
    for i in 0..k {
        r[i][i] = Some(1.0);
        p[i][i] = Some(1.0);
        for j in (i + 1)..k {
            match pearson(&samples[i], &samples[j]) {
                Ok(t) => {
                    for (a, b) in [(i, j), (j, i)] {
                        r[a][b] = t.r;
                        p[a][b] = Some(t.p_value);
                        tests[a][b] = Some(t);
                    }
                }
                Err(e) => issues.push(CorrelationIssue { row: i, col: j, reason: e.to_string() }),
            }
        }
    }
    Ok(CorrelationMatrix { labels: labels.to_vec(), r, p, tests, issues })
}
