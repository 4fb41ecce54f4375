// SPDX-License-Identifier: Apache-2.0

//! Shot sampling. Every draw comes from ChaCha20 seeded with
//! `seed_from_u64(seed)`, so counts are identical across platforms.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use super::noise::NoiseModel;
use super::SimError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub counts: BTreeMap<String, u64>,
    pub shots: u64,
    pub seed: u64,
}

impl Counts {
    pub fn get(&self, outcome: &str) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn frequency(&self, outcome: &str) -> f64 {
        self.get(outcome) as f64 / self.shots as f64
    }

    /// Fraction of shots where every bit read 0.
    pub fn all_zero_frequency(&self) -> f64 {
        let hits: u64 = self
            .counts
            .iter()
            .filter(|(k, _)| k.bytes().all(|b| b == b'0'))
            .map(|(_, &n)| n)
            .sum();
        hits as f64 / self.shots as f64
    }
}

/// Draws `shots` outcomes from `outcome_probs`, then flips each bit with the
/// readout probabilities of its classical bit (the last character is bit 0).
pub fn sample_counts(
    outcome_probs: &BTreeMap<String, f64>,
    noise: &NoiseModel,
    shots: u64,
    seed: u64,
) -> Result<Counts, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    noise.validate()?;
    let outcomes: Vec<&String> = outcome_probs.keys().collect();
    let weights = outcome_probs.values().map(|&p| p.max(0.0));
    let dist = WeightedIndex::new(weights)
        .map_err(|e| SimError::InvalidDensity(format!("outcome distribution: {e}")))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let flips = noise.has_readout_error();
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let drawn = outcomes[dist.sample(&mut rng)];
        let key = if flips {
            let width = drawn.len();
            let bits: String = drawn
                .bytes()
                .enumerate()
                .map(|(pos, b)| {
                    let r = noise.readout_for(width - 1 - pos);
                    let p = if b == b'0' { r.p01 } else { r.p10 };
                    let flip = rng.random_bool(p);
                    match (b, flip) {
                        (b'0', true) => '1',
                        (b'1', true) => '0',
                        (b, false) => b as char,
                        _ => unreachable!("outcome strings are binary"),
                    }
                })
                .collect();
            bits
        } else {
            drawn.clone()
        };
        *counts.entry(key).or_insert(0) += 1;
    }
    Ok(Counts { counts, shots, seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::Readout;

    fn certain_zero() -> BTreeMap<String, f64> {
        BTreeMap::from([("0".to_string(), 1.0), ("1".to_string(), 0.0)])
    }

    #[test]
    fn deterministic_distribution() {
        let c = sample_counts(&certain_zero(), &NoiseModel::ideal(), 100, 3).unwrap();
        assert_eq!(c.counts, BTreeMap::from([("0".to_string(), 100)]));
        assert_eq!(c.shots, 100);
    }

    #[test]
    fn readout_flip_concentration() {
        let noise = NoiseModel {
            readout: Readout { p01: 0.1, p10: 0.0 },
            ..NoiseModel::ideal()
        };
        let shots = 1_000_000;
        let c = sample_counts(&certain_zero(), &noise, shots, 11).unwrap();
        let sigma = (0.1f64 * 0.9 / shots as f64).sqrt();
        assert!((c.frequency("1") - 0.1).abs() < 3.0 * sigma, "{}", c.frequency("1"));
    }

    #[test]
    fn same_seed_same_counts() {
        let probs = BTreeMap::from([
            ("00".to_string(), 0.4),
            ("01".to_string(), 0.1),
            ("10".to_string(), 0.2),
            ("11".to_string(), 0.3),
        ]);
        let noise = NoiseModel {
            readout: Readout { p01: 0.05, p10: 0.07 },
            ..NoiseModel::ideal()
        };
        let a = sample_counts(&probs, &noise, 5000, 42).unwrap();
        let b = sample_counts(&probs, &noise, 5000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.counts.values().sum::<u64>(), 5000);
        let c = sample_counts(&probs, &noise, 5000, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn per_bit_readout_uses_lsb_last() {
        let probs = BTreeMap::from([("00".to_string(), 1.0)]);
        let noise = NoiseModel {
            readout_per_bit: vec![Readout { p01: 1.0, p10: 0.0 }, Readout::default()],
            ..NoiseModel::ideal()
        };
        let c = sample_counts(&probs, &noise, 10, 0).unwrap();
        assert_eq!(c.get("01"), 10);
    }

    #[test]
    fn zero_shots_rejected() {
        assert_eq!(
            sample_counts(&certain_zero(), &NoiseModel::ideal(), 0, 0).unwrap_err(),
            SimError::NoShots
        );
    }
}
