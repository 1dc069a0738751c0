//! Partition similarity: NMI, and its finite-size corrections rNMI and rrNMI.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rng::{derive_seed, stream, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MetricConfig {
    /// Random partitions drawn to estimate the expected NMI.
    pub samples: usize,
    pub seed: u64,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self { samples: 100, seed: 0 }
    }
}

fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    let mut counts: Vec<usize> = counts.collect();
    counts.sort_unstable();
    -counts
        .into_iter()
        .map(|c| {
            let p = c as f64 / n;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Normalized mutual information `2 I(A;B) / (H(A) + H(B))`, natural logs.
///
/// Two single-block partitions score 1; a single block against anything else scores 0.
pub fn nmi(a: &Partition, b: &Partition) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { left: a.len(), right: b.len() });
    }
    if a.is_empty() {
        return Err(Error::InvalidParameter("partitions are empty".into()));
    }
    let n = a.len() as f64;
    let mut joint: HashMap<(usize, usize), usize> = HashMap::new();
    for (&x, &y) in a.labels().iter().zip(b.labels()) {
        *joint.entry((x, y)).or_insert(0) += 1;
    }
    let ha = entropy(a.sizes().values().copied(), n);
    let hb = entropy(b.sizes().values().copied(), n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    let hab = entropy(joint.into_values(), n);
    let mutual = ha + hb - hab;
    Ok((2.0 * mutual / (ha + hb)).clamp(0.0, 1.0))
}

/// Random partition with exactly the block sizes of `b`: shuffle the vertex
/// ids and cut them into consecutive runs of `b`'s sizes.
pub fn sample_size_matched(b: &Partition, rng: &mut Rng) -> Partition {
    let mut ids: Vec<usize> = (0..b.len()).collect();
    ids.shuffle(rng);
    let mut labels = vec![0; b.len()];
    let mut start = 0;
    for (z, &size) in b.sizes().values().enumerate() {
        for &v in &ids[start..start + size] {
            labels[v] = z;
        }
        start += size;
    }
    Partition::new(labels)
}

/// Mean of the draws, taken relative to the first so identical draws give
/// that value back exactly.
fn offset_mean(values: &[f64]) -> f64 {
    let first = values[0];
    first + values.iter().map(|v| v - first).sum::<f64>() / values.len() as f64
}

/// Expected `NMI(A, C)` over `samples` size-matched draws `C` of `b`, one stream per draw.
pub fn expected_random_nmi(a: &Partition, b: &Partition, config: &MetricConfig) -> Result<f64> {
    expected_random_nmi_draws(a, b, config).map(|d| offset_mean(&d))
}

/// The individual draws behind [`expected_random_nmi`].
pub fn expected_random_nmi_draws(a: &Partition, b: &Partition, config: &MetricConfig) -> Result<Vec<f64>> {
    if config.samples == 0 {
        return Err(Error::InvalidParameter("samples must be at least 1".into()));
    }
    if a.len() != b.len() {
        return Err(Error::SizeMismatch { left: a.len(), right: b.len() });
    }
    (0..config.samples as u64)
        .into_par_iter()
        .map(|k| nmi(a, &sample_size_matched(b, &mut stream(config.seed, k))))
        .collect()
}

/// `rNMI(A, B) = NMI(A, B) - <NMI(A, C)>` with `C` size-matched to `B`.
pub fn rnmi(a: &Partition, b: &Partition, config: &MetricConfig) -> Result<f64> {
    let direct = nmi(a, b)?;
    Ok(direct - expected_random_nmi(a, b, config)?)
}

/// `rrNMI(A, B) = rNMI(A, B) / rNMI(A, A)` for planted `A` and obtained `B`.
///
/// Numerator and denominator use independent streams derived from
/// `config.seed`; when `B` groups vertices exactly like `A` the denominator
/// stream is reused, so the ratio is exactly 1.
pub fn rrnmi(planted: &Partition, obtained: &Partition, config: &MetricConfig) -> Result<f64> {
    if planted.len() != obtained.len() {
        return Err(Error::SizeMismatch { left: planted.len(), right: obtained.len() });
    }
    let reference_config = MetricConfig { seed: derive_seed(config.seed, &[1]), ..*config };
    let reference = rnmi(planted, planted, &reference_config)?;
    if reference.abs() < 1e-12 {
        return Err(Error::DegenerateReference);
    }
    if planted.same_clustering(obtained) {
        return Ok(1.0);
    }
    let numerator_config = MetricConfig { seed: derive_seed(config.seed, &[0]), ..*config };
    Ok(rnmi(planted, obtained, &numerator_config)? / reference)
}
