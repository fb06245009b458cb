use super::special::regularized_incomplete_beta;
use crate::error::{Error, Result};

fn check_df(name: &str, df: f64) -> Result<()> {
    if df > 0.0 && df.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive and finite (got {df})")))
    }
}

/// Student t CDF.
pub fn t_cdf(t: f64, df: f64) -> Result<f64> {
    check_df("df", df)?;
    if t.is_nan() {
        return Err(Error::Domain("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(if t > 0.0 { 1.0 } else { 0.0 });
    }
    let tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t))?;
    Ok(if t > 0.0 { 1.0 - tail } else { tail })
}

/// `P(|T| >= |t|)`.
pub fn t_two_sided_p(t: f64, df: f64) -> Result<f64> {
    check_df("df", df)?;
    if t.is_nan() {
        return Err(Error::Domain("t statistic is NaN".into()));
    }
    if t.is_infinite() {
        return Ok(0.0);
    }
    regularized_incomplete_beta(df / 2.0, 0.5, df / (df + t * t)).map(|p| p.clamp(0.0, 1.0))
}

/// Fisher–Snedecor F CDF.
pub fn f_cdf(f: f64, d1: f64, d2: f64) -> Result<f64> {
    check_df("d1", d1)?;
    check_df("d2", d2)?;
    if f.is_nan() || f < 0.0 {
        return Err(Error::Domain(format!("F statistic must be >= 0 (got {f})")));
    }
    if f.is_infinite() {
        return Ok(1.0);
    }
    regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2))
}

/// `P(F >= f)`, computed directly rather than as `1 - cdf` to keep small tails accurate.
pub fn f_upper_tail(f: f64, d1: f64, d2: f64) -> Result<f64> {
    check_df("d1", d1)?;
    check_df("d2", d2)?;
    if f.is_nan() || f < 0.0 {
        return Err(Error::Domain(format!("F statistic must be >= 0 (got {f})")));
    }
    if f.is_infinite() {
        return Ok(0.0);
    }
    regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f))
}
