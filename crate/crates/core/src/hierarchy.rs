//! Goal / criteria / alternatives synthesis.

use crate::error::{Error, Result};
use crate::weights::{WeightMethod, WeightVector};

/// Global alternative weights `sum_c w_c * local_{c,a}`.
///
/// `local[c]` holds the alternative weights under criterion `c`, in the same
/// order as the criteria in `criteria`. All local vectors must share one
/// alternative label list.
pub fn synthesize_hierarchy(criteria: &WeightVector, local: &[WeightVector]) -> Result<WeightVector> {
    if local.len() != criteria.len() {
        return Err(Error::Schema(format!(
            "{} criteria but {} local weight vectors",
            criteria.len(),
            local.len()
        )));
    }
    let first = local
        .first()
        .ok_or_else(|| Error::Schema("hierarchy has no criteria".into()))?;
    let alternatives = first.labels().to_vec();
    if let Some((c, _)) = local
        .iter()
        .enumerate()
        .find(|(_, l)| l.labels() != alternatives.as_slice())
    {
        return Err(Error::Schema(format!(
            "alternatives under criterion `{}` differ from those under `{}`",
            criteria.labels()[c],
            criteria.labels()[0]
        )));
    }
    let mut global = vec![0.0; alternatives.len()];
    for (cw, lw) in criteria.weights().iter().zip(local) {
        for (g, x) in global.iter_mut().zip(lw.weights()) {
            *g += cw * x;
        }
    }
    WeightVector::from_unnormalized(alternatives, &global, WeightMethod::Synthesized)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wv(labels: &[&str], w: &[f64]) -> WeightVector {
        WeightVector::new(
            labels.iter().map(|s| s.to_string()).collect(),
            w.to_vec(),
            WeightMethod::Eigenvector,
        )
        .unwrap()
    }

    #[test]
    fn single_criterion_is_identity() {
        let g = synthesize_hierarchy(&wv(&["c"], &[1.0]), &[wv(&["a", "b"], &[0.7, 0.3])]).unwrap();
        assert_eq!(g.weights(), &[0.7, 0.3]);
        assert_eq!(g.method(), WeightMethod::Synthesized);
    }

    #[test]
    fn symmetric_split() {
        let g = synthesize_hierarchy(
            &wv(&["c1", "c2"], &[0.5, 0.5]),
            &[wv(&["a", "b"], &[1.0, 0.0]), wv(&["a", "b"], &[0.0, 1.0])],
        )
        .unwrap();
        assert_eq!(g.weights(), &[0.5, 0.5]);
    }

    #[test]
    fn weighted_combination() {
        let g = synthesize_hierarchy(
            &wv(&["c1", "c2"], &[0.6, 0.4]),
            &[wv(&["a", "b"], &[0.5, 0.5]), wv(&["a", "b"], &[0.25, 0.75])],
        )
        .unwrap();
        assert!((g.weights()[0] - 0.40).abs() < 1e-15);
        assert!((g.weights()[1] - 0.60).abs() < 1e-15);
    }

    #[test]
    fn mismatched_alternatives_rejected() {
        let r = synthesize_hierarchy(
            &wv(&["c1", "c2"], &[0.6, 0.4]),
            &[wv(&["a", "b"], &[0.5, 0.5]), wv(&["a", "x"], &[0.25, 0.75])],
        );
        assert!(matches!(r, Err(Error::Schema(_))));
        let r = synthesize_hierarchy(&wv(&["c1", "c2"], &[0.6, 0.4]), &[wv(&["a"], &[1.0])]);
        assert!(matches!(r, Err(Error::Schema(_))));
    }
}
