//! Outcome distributions, count histograms and seeded shot sampling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bits;
use crate::error::{Error, Result};

const DIST_TOL: f64 = 1e-9;

/// Probability mass over the `2^n` basis outcomes, indexed by basis integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: usize,
    probs: Vec<f64>,
}

impl Distribution {
    /// Validated constructor: nonnegative masses summing to 1 within 1e-9.
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != 1usize << n {
            return Err(Error::invalid(format!(
                "distribution over {n} qubits needs {} entries, got {}",
                1usize << n,
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= -DIST_TOL) || !p.is_finite()) {
            return Err(Error::invalid(format!("negative or non-finite mass {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > DIST_TOL {
            return Err(Error::invalid(format!("distribution sums to {total}, expected 1")));
        }
        Ok(Distribution { n, probs })
    }

    pub(crate) fn from_probs_unchecked(n: usize, probs: Vec<f64>) -> Self {
        Distribution { n, probs }
    }

    pub fn uniform(n: usize) -> Self {
        let d = 1usize << n;
        Distribution { n, probs: vec![1.0 / d as f64; d] }
    }

    /// Build from a `label -> mass` map; missing labels get zero mass.
    pub fn from_labels(n: usize, masses: &BTreeMap<String, f64>) -> Result<Self> {
        let mut probs = vec![0.0; 1 << n];
        for (label, &p) in masses {
            probs[bits::parse_label(label, n)?] += p;
        }
        Self::new(n, probs)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, index: usize) -> f64 {
        self.probs[index]
    }

    pub fn prob_of(&self, label: &str) -> Result<f64> {
        Ok(self.probs[bits::parse_label(label, self.n)?])
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Every label with its mass, ascending by basis index.
    pub fn to_label_map(&self) -> BTreeMap<String, f64> {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (bits::label(i, self.n), p))
            .collect()
    }

    /// Index of the largest mass (lowest index wins ties).
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > self.probs[best] {
                best = i;
            }
        }
        best
    }

    /// Marginal over the qubits in `keep` (ascending order of `keep` becomes
    /// qubit 0, 1, ... of the result).
    pub fn marginal(&self, keep: &[usize]) -> Distribution {
        let mut out = vec![0.0; 1 << keep.len()];
        for (i, &p) in self.probs.iter().enumerate() {
            let j = keep
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (i >> q & 1) << k);
            out[j] += p;
        }
        Distribution { n: keep.len(), probs: out }
    }
}

/// Shot counts keyed by display label. Only nonzero counts are stored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsHistogram {
    pub n: usize,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

impl CountsHistogram {
    pub fn from_counts(n: usize, counts: BTreeMap<String, u64>) -> Result<Self> {
        for label in counts.keys() {
            bits::parse_label(label, n)?;
        }
        let shots = counts.values().sum();
        if shots == 0 {
            return Err(Error::invalid("histogram has no shots"));
        }
        let counts = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        Ok(CountsHistogram { n, shots, counts })
    }

    pub fn count(&self, label: &str) -> u64 {
        self.counts.get(label).copied().unwrap_or(0)
    }

    pub fn count_index(&self, index: usize) -> u64 {
        self.count(&bits::label(index, self.n))
    }

    /// Empirical frequencies `count / shots`.
    pub fn to_distribution(&self) -> Distribution {
        let mut probs = vec![0.0; 1 << self.n];
        for (label, &c) in &self.counts {
            let i = bits::parse_label(label, self.n).expect("labels validated on construction");
            probs[i] = c as f64 / self.shots as f64;
        }
        Distribution { n: self.n, probs }
    }
}

/// RNG for stream `stream` of `seed`. Distinct streams are independent.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Sample `shots` outcomes from `dist` with stream 0 of `seed`.
pub fn sample_counts(dist: &Distribution, shots: u64, seed: u64) -> Result<CountsHistogram> {
    sample_counts_stream(dist, shots, seed, 0)
}

pub fn sample_counts_stream(
    dist: &Distribution,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<CountsHistogram> {
    if shots == 0 {
        return Err(Error::invalid("shots must be at least 1"));
    }
    let total = dist.total();
    if (total - 1.0).abs() > DIST_TOL || dist.probs.iter().any(|p| *p < -DIST_TOL) {
        return Err(Error::invalid(format!("distribution sums to {total}, expected 1")));
    }
    let mut cdf = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0;
    for p in &dist.probs {
        acc += p.max(0.0);
        cdf.push(acc);
    }
    let mut tallies = vec![0u64; cdf.len()];
    let mut rng = rng_stream(seed, stream);
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * acc;
        let i = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
        tallies[i] += 1;
    }
    let counts = tallies
        .into_iter()
        .enumerate()
        .filter(|(_, c)| *c > 0)
        .map(|(i, c)| (bits::label(i, dist.n), c))
        .collect();
    Ok(CountsHistogram { n: dist.n, shots, counts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn deterministic_distribution() {
        let mut p = vec![0.0; 8];
        p[0] = 1.0;
        let d = Distribution::new(3, p).unwrap();
        let h = sample_counts(&d, 100, 42).unwrap();
        assert_eq!(h.count("000"), 100);
        assert_eq!(h.counts.len(), 1);
    }

    #[test]
    fn uniform_million_shots_within_five_sigma() {
        let d = Distribution::uniform(3);
        let shots = 1_000_000u64;
        let sigma = (shots as f64 * 0.125 * 0.875).sqrt();
        for seed in [0, 1, 2] {
            let h = sample_counts(&d, shots, seed).unwrap();
            for i in 0..8 {
                let dev = (h.count_index(i) as f64 - 125_000.0).abs();
                assert!(dev < 5.0 * sigma, "seed {seed} label {i}: {dev}");
            }
        }
    }

    #[test]
    fn same_seed_same_histogram() {
        let d = Distribution::new(2, vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(sample_counts(&d, 5000, 9).unwrap(), sample_counts(&d, 5000, 9).unwrap());
        assert_ne!(
            sample_counts_stream(&d, 5000, 9, 0).unwrap(),
            sample_counts_stream(&d, 5000, 9, 1).unwrap()
        );
    }

    #[test]
    fn rejects_unnormalized() {
        let d = Distribution::from_probs_unchecked(1, vec![0.5, 0.4]);
        assert!(sample_counts(&d, 10, 0).is_err());
        assert!(Distribution::new(1, vec![0.5, 0.4]).is_err());
        assert!(sample_counts(&Distribution::uniform(1), 0, 0).is_err());
    }

    #[test]
    fn marginal_keeps_requested_qubits() {
        let mut p = vec![0.0; 8];
        p[0b101] = 1.0;
        let d = Distribution::new(3, p).unwrap();
        let m = d.marginal(&[0, 2]);
        assert_eq!(m.probs(), &[0.0, 0.0, 0.0, 1.0]);
        let m = d.marginal(&[1]);
        assert_eq!(m.probs(), &[1.0, 0.0]);
    }

    proptest! {
        #[test]
        fn counts_total_shots(
            raw in proptest::collection::vec(0.0f64..1.0, 4),
            shots in 1u64..5000,
            seed in any::<u64>(),
        ) {
            let s: f64 = raw.iter().sum::<f64>() + 1e-3;
            let probs: Vec<f64> = raw.iter().map(|p| (p + 1e-3 / 4.0) / s).collect();
            let d = Distribution::new(2, probs).unwrap();
            let h = sample_counts(&d, shots, seed).unwrap();
            prop_assert_eq!(h.counts.values().sum::<u64>(), shots);
            prop_assert_eq!(h.shots, shots);
            prop_assert_eq!(h, sample_counts(&d, shots, seed).unwrap());
        }
    }
}
