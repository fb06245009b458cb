//! Monte Carlo estimation of the random index.
//!
//! Matrix `k` of order `n` draws from its own ChaCha stream (`set_stream(k)`)
//! under a key derived from `(seed, n)`, and per-matrix CIs are reduced in
//! index order, so estimates are bit-identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_RI_SAMPLES;
use crate::consistency::RANDOM_INDEX;
use crate::error::{Error, Result};
use crate::matrix::ComparisonMatrix;
use crate::scale::JudgmentScale;
use crate::weights::principal_eigenpair;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiEstimate {
    pub order: usize,
    pub samples: usize,
    pub mean_ci: f64,
    pub std_error: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SimulationConfig {
    pub samples: usize,
    pub seed: u64,
    pub scale: JudgmentScale,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl SimulationConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        SimulationConfig { samples, seed, scale: JudgmentScale::saaty(), workers: None }
    }
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self::new(DEFAULT_RI_SAMPLES, crate::config::DEFAULT_SEED)
    }
}

// splitmix64 finalizer
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The generator owning sample `index` of order `n`.
pub fn substream(seed: u64, n: usize, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed ^ mix(n as u64)));
    rng.set_stream(index);
    rng
}

/// Upper-triangle entries drawn uniformly from the scale; reciprocal below.
pub fn random_reciprocal_matrix<R: Rng + ?Sized>(n: usize, scale: &JudgmentScale, rng: &mut R) -> ComparisonMatrix {
    assert!(n >= 1, "matrix order must be at least 1");
    let values = scale.values();
    let mut entries = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = values[rng.gen_range(0..values.len())];
            entries[i][j] = v.to_f64();
            entries[j][i] = v.recip().to_f64();
        }
    }
    let labels = (1..=n).map(|k| format!("C{k}")).collect();
    ComparisonMatrix::new(labels, entries).expect("scale values are positive and reciprocal")
}

fn ci_of(n: usize, scale: &JudgmentScale, seed: u64, index: u64) -> Result<f64> {
    if n <= 2 {
        return Ok(0.0);
    }
    let m = random_reciprocal_matrix(n, scale, &mut substream(seed, n, index));
    let (lambda, _) = principal_eigenpair(&m)?;
    Ok((lambda - n as f64) / (n as f64 - 1.0))
}

fn run<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map(|pool| pool.install(job))
            .map_err(|e| Error::Domain(format!("cannot build worker pool: {e}"))),
    }
}

pub fn estimate_random_index_with(n: usize, cfg: &SimulationConfig) -> Result<RiEstimate> {
    if n == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    if cfg.samples == 0 {
        return Err(Error::Domain("need at least one sample".into()));
    }
    let cis: Vec<f64> = run(cfg.workers, || {
        (0..cfg.samples as u64)
            .into_par_iter()
            .map(|k| ci_of(n, &cfg.scale, cfg.seed, k))
            .collect::<Result<Vec<f64>>>()
    })??;
    let count = cis.len() as f64;
    let mean = cis.iter().sum::<f64>() / count;
    let std_error = if cis.len() > 1 {
        let var = cis.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (count - 1.0);
        (var / count).sqrt()
    } else {
        0.0
    };
    Ok(RiEstimate { order: n, samples: cfg.samples, mean_ci: mean, std_error, seed: cfg.seed })
}

/// Mean CI of `samples` random reciprocal matrices of order `n`.
pub fn estimate_random_index(n: usize, samples: usize, seed: u64, scale: &JudgmentScale) -> Result<RiEstimate> {
    let cfg = SimulationConfig { samples, seed, scale: scale.clone(), workers: None };
    estimate_random_index_with(n, &cfg)
}

pub fn ri_table_with(max_n: usize, cfg: &SimulationConfig) -> Result<Vec<RiEstimate>> {
    if max_n > RANDOM_INDEX.len() {
        return Err(Error::UnsupportedOrder(max_n));
    }
    (1..=max_n).map(|n| estimate_random_index_with(n, cfg)).collect()
}

/// Estimates for orders `1..=max_n` on the Saaty scale.
pub fn ri_table(max_n: usize, samples: usize, seed: u64) -> Result<Vec<RiEstimate>> {
    ri_table_with(max_n, &SimulationConfig::new(samples, seed))
}
