//! Judgment scales.
//!
//! Judgments taken from a finite scale are kept as exact rationals so that
//! `1/3` never drifts through a `0.333` round trip; they become `f64` only
//! when a matrix is assembled.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::config::SCALE_SNAP_TOL;
use crate::error::{Error, Result};

/// A positive rational preference intensity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Judgment(Ratio<i64>);

impl Judgment {
    pub fn new(numer: i64, denom: i64) -> Result<Self> {
        if numer <= 0 || denom <= 0 {
            return Err(Error::Domain(format!(
                "judgment {numer}/{denom} must be strictly positive"
            )));
        }
        Ok(Judgment(Ratio::new(numer, denom)))
    }

    pub fn integer(v: i64) -> Result<Self> {
        Self::new(v, 1)
    }

    pub fn one() -> Self {
        Judgment(Ratio::from_integer(1))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn recip(&self) -> Self {
        Judgment(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Judgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for Judgment {
    type Err = Error;

    /// Accepts `p/q` or an integer. Decimals are handled by
    /// [`JudgmentScale::parse_value`], which snaps them onto a scale.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Domain(format!("`{s}` is not a rational judgment"));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                Judgment::new(p, q)
            }
            None => Judgment::integer(s.parse().map_err(|_| bad())?),
        }
    }
}

/// The set of admissible judgments together with their verbal anchors.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgmentScale {
    name: String,
    values: Vec<Judgment>,
    labels: Vec<String>,
}

impl JudgmentScale {
    /// Builds a scale, checking it is closed under reciprocals and contains 1.
    pub fn new(name: impl Into<String>, entries: Vec<(Judgment, String)>) -> Result<Self> {
        let mut entries = entries;
        entries.sort_by_key(|e| e.0);
        entries.dedup_by(|a, b| a.0 == b.0);
        let values: Vec<Judgment> = entries.iter().map(|e| e.0).collect();
        if !values.contains(&Judgment::one()) {
            return Err(Error::Domain("scale must contain 1".into()));
        }
        for v in &values {
            if values.binary_search(&v.recip()).is_err() {
                return Err(Error::Domain(format!(
                    "scale contains {v} but not its reciprocal {}",
                    v.recip()
                )));
            }
        }
        Ok(JudgmentScale {
            name: name.into(),
            values,
            labels: entries.into_iter().map(|e| e.1).collect(),
        })
    }

    /// The five-point survey scale {1/3, 1/2, 1, 2, 3}.
    pub fn study() -> Self {
        let e = |p, q, l: &str| (Judgment::new(p, q).unwrap(), l.to_string());
        JudgmentScale::new(
            "study",
            vec![
                e(1, 3, "Strongly less important"),
                e(1, 2, "Moderately less important"),
                e(1, 1, "Similarly as important as"),
                e(2, 1, "Moderately more important than"),
                e(3, 1, "Strongly more important than"),
            ],
        )
        .expect("study scale is reciprocal")
    }

    /// Saaty's fundamental scale {1/9, ..., 1/2, 1, 2, ..., 9}.
    pub fn saaty() -> Self {
        const ANCHORS: [&str; 9] = [
            "Equal importance",
            "Weak or slight",
            "Moderate importance",
            "Moderate plus",
            "Strong importance",
            "Strong plus",
            "Very strong importance",
            "Very, very strong",
            "Extreme importance",
        ];
        let mut entries = Vec::with_capacity(17);
        for (k, label) in (1..=9).zip(ANCHORS) {
            entries.push((Judgment::integer(k).unwrap(), label.to_string()));
            if k > 1 {
                entries.push((Judgment::new(1, k).unwrap(), format!("Reciprocal of: {label}")));
            }
        }
        JudgmentScale::new("saaty", entries).expect("saaty scale is reciprocal")
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "study" => Ok(Self::study()),
            "saaty" => Ok(Self::saaty()),
            other => Err(Error::Domain(format!(
                "unknown scale `{other}` (expected `study` or `saaty`)"
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Admissible values in ascending order.
    pub fn values(&self) -> &[Judgment] {
        &self.values
    }

    pub fn label(&self, v: Judgment) -> Option<&str> {
        self.values.binary_search(&v).ok().map(|i| self.labels[i].as_str())
    }

    pub fn contains(&self, v: Judgment) -> bool {
        self.values.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Snaps a real value onto the scale, if one lies within the snap tolerance.
    pub fn snap(&self, x: f64) -> Option<Judgment> {
        if !x.is_finite() {
            return None;
        }
        self.values
            .iter()
            .copied()
            .find(|v| (v.to_f64() - x).abs() <= SCALE_SNAP_TOL)
    }

    /// Parses `1/3`, `3`, `0.333` or `0.5` into an admissible judgment.
    pub fn parse_value(&self, s: &str) -> Result<Judgment> {
        let s = s.trim();
        let v = match s.parse::<Judgment>() {
            Ok(v) => Some(v),
            Err(_) => s.parse::<f64>().ok().and_then(|x| self.snap(x)),
        };
        match v {
            Some(v) if self.contains(v) => Ok(v),
            _ => Err(Error::Domain(format!(
                "`{s}` is not on the {} scale {{{}}}",
                self.name,
                self.values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            ))),
        }
    }
}
