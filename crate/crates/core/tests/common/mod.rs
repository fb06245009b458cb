//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's numerics.

#![allow(dead_code)]

use std::f64::consts::PI;

pub const BETA_GRID_CSV: &str = include_str!("../data/beta_grid.csv");
pub const CANDY_LAMBDA_FIXTURE: &str = include_str!("../data/candy_lambda_max.txt");

/// Grid points `(a, b, x)` for the incomplete beta comparison.
pub fn beta_grid() -> Vec<(f64, f64, f64)> {
    BETA_GRID_CSV
        .lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.trim().parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

pub fn candy_lambda_max() -> f64 {
    CANDY_LAMBDA_FIXTURE
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap()
        .trim()
        .parse()
        .unwrap()
}

/// `int_0^x t^(a-1) (1-t)^(b-1) dt` for `0 < x <= 1/2` by tanh-sinh
/// quadrature. The node map is written in terms of the distance to the left
/// endpoint so the integrable singularity at 0 is sampled without
/// cancellation.
fn left_integral(a: f64, b: f64, x: f64, h: f64) -> f64 {
    let mut sum = 0.0;
    let kmax = (4.5 / h) as i64;
    for k in -kmax..=kmax {
        let s = k as f64 * h;
        let e = (PI * s.sinh()).exp();
        // t = x / (1 + e): t -> x as s -> -inf, t -> 0 as s -> +inf
        let t = x / (1.0 + e);
        if t <= 0.0 || !t.is_finite() {
            continue;
        }
        let dt = x * PI * s.cosh() * e / ((1.0 + e) * (1.0 + e));
        if !dt.is_finite() || dt == 0.0 {
            continue;
        }
        let f = (a - 1.0).mul_add(t.ln(), (b - 1.0) * (-t).ln_1p()).exp();
        sum += f * dt;
    }
    sum * h
}

fn partial(a: f64, b: f64, x: f64, h: f64) -> f64 {
    if x <= 0.5 {
        left_integral(a, b, x, h)
    } else {
        // reflect the right-hand piece so both endpoints are handled on the left
        left_integral(a, b, 0.5, h) + left_integral(b, a, 0.5, h) - left_integral(b, a, 1.0 - x, h)
    }
}

/// Regularized incomplete beta by direct numerical integration.
pub fn incomplete_beta_quadrature(a: f64, b: f64, x: f64) -> f64 {
    let h = 1.0 / 64.0;
    let whole = left_integral(a, b, 0.5, h) + left_integral(b, a, 0.5, h);
    if x <= 0.5 {
        partial(a, b, x, h) / whole
    } else {
        1.0 - left_integral(b, a, 1.0 - x, h) / whole
    }
}

/// Same integral at half the step, for a self-convergence check.
pub fn incomplete_beta_quadrature_refined(a: f64, b: f64, x: f64) -> f64 {
    let h = 1.0 / 128.0;
    let whole = left_integral(a, b, 0.5, h) + left_integral(b, a, 0.5, h);
    if x <= 0.5 {
        partial(a, b, x, h) / whole
    } else {
        1.0 - left_integral(b, a, 1.0 - x, h) / whole
    }
}

/// Student t CDF via the quadrature oracle.
pub fn t_cdf_oracle(t: f64, df: f64) -> f64 {
    let tail = 0.5 * incomplete_beta_quadrature(df / 2.0, 0.5, df / (df + t * t));
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// F CDF via the quadrature oracle.
pub fn f_cdf_oracle(f: f64, d1: f64, d2: f64) -> f64 {
    incomplete_beta_quadrature(d1 / 2.0, d2 / 2.0, d1 * f / (d1 * f + d2))
}

/// Largest real root of the characteristic polynomial of a 3x3 positive
/// reciprocal matrix with upper entries `m12, m13, m23`:
/// `l^3 - 3 l^2 - (r + 1/r - 2) = 0`, `r = m12 m23 / m13`. Bisection on [3, 4].
pub fn reciprocal3_lambda_max(m12: f64, m13: f64, m23: f64) -> f64 {
    let r = m12 * m23 / m13;
    let c = r + 1.0 / r - 2.0;
    let p = |l: f64| l * l * (l - 3.0) - c;
    let (mut lo, mut hi) = (3.0, 3.0 + c.cbrt().max(1.0) + 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Plain two-pass sample statistics.
pub fn mean_sd(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let m = x.iter().sum::<f64>() / n;
    let v = x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1.0);
    (m, v.sqrt())
}
