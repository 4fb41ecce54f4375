// SPDX-License-Identifier: Apache-2.0

//! Search for multiplier sets that minimize the worst non-member acceptance
//! of the parallel machine.

use std::cmp::Ordering;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::{ensure_odd_prime, ensure_power_of_two, QfaError};

/// Largest number of candidate sets an exhaustive search may visit.
pub const EXHAUSTIVE_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    /// Sample `trials` sets; trial `i` draws from stream `i` of a ChaCha20
    /// generator keyed by `seed`.
    Random { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub multipliers: Vec<u32>,
    pub worst_case: f64,
}

/// Worst acceptance over non-member lengths `1..p` using a cosine table.
fn worst_case(cos_table: &[f64], multipliers: &[u32]) -> f64 {
    let p = cos_table.len() as u64;
    let d = multipliers.len() as f64;
    (1..p)
        .map(|l| {
            let mean = multipliers
                .iter()
                .map(|&k| cos_table[((k as u64 * l) % p) as usize])
                .sum::<f64>()
                / d;
            mean * mean
        })
        .fold(0.0, f64::max)
}

fn better(a: SearchResult, b: SearchResult) -> SearchResult {
    match a.worst_case.partial_cmp(&b.worst_case).unwrap_or(Ordering::Equal) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if a.multipliers <= b.multipliers {
                a
            } else {
                b
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// All `d`-subsets of `1..=n` in lexicographic order.
fn combinations(n: u32, d: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current: Vec<u32> = (1..=d as u32).collect();
    loop {
        out.push(current.clone());
        // rightmost position that can still advance
        let Some(i) = (0..d).rev().find(|&i| current[i] < n - (d - 1 - i) as u32) else {
            return out;
        };
        current[i] += 1;
        for j in i + 1..d {
            current[j] = current[j - 1] + 1;
        }
    }
}

/// Returns the multiplier set of size `d` minimizing the worst non-member
/// acceptance probability; ties go to the lexicographically smallest set.
pub fn search_k(p: u32, d: usize, mode: SearchMode) -> Result<SearchResult, QfaError> {
    ensure_odd_prime(p)?;
    ensure_power_of_two(d)?;
    if d > (p - 1) as usize {
        return Err(QfaError::TooManyMultipliers {
            d,
            p,
            available: p - 1,
        });
    }
    let cos_table: Vec<f64> = (0..p)
        .map(|r| super::rotation_angle(p, r as u64).cos())
        .collect();
    let evaluate = |multipliers: Vec<u32>| SearchResult {
        worst_case: worst_case(&cos_table, &multipliers),
        multipliers,
    };

    let best = match mode {
        SearchMode::Exhaustive => {
            let candidates = binomial((p - 1) as u64, d as u64);
            if candidates > EXHAUSTIVE_BUDGET {
                return Err(QfaError::SearchBudgetExceeded {
                    candidates,
                    budget: EXHAUSTIVE_BUDGET,
                });
            }
            combinations(p - 1, d)
                .into_par_iter()
                .map(evaluate)
                .reduce_with(better)
        }
        SearchMode::Random { trials, seed } => {
            if trials == 0 {
                return Err(QfaError::NoTrials);
            }
            (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let mut rng = ChaCha20Rng::seed_from_u64(seed);
                    rng.set_stream(trial as u64);
                    let mut set: Vec<u32> = index::sample(&mut rng, (p - 1) as usize, d)
                        .into_iter()
                        .map(|i| i as u32 + 1)
                        .collect();
                    set.sort_unstable();
                    evaluate(set)
                })
                .reduce_with(better)
        }
    };
    Ok(best.expect("at least one candidate"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Worst case straight from the definition, no tables.
    fn oracle_worst(p: u32, set: &[u32]) -> f64 {
        (1..p)
            .map(|l| {
                let s: f64 = set
                    .iter()
                    .map(|&k| (2.0 * PI * k as f64 * l as f64 / p as f64).cos())
                    .sum();
                (s / set.len() as f64).powi(2)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn exhaustive_p5_d2_matches_hand_enumeration() {
        let all = [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]];
        let truth = all
            .iter()
            .map(|s| oracle_worst(5, s))
            .fold(f64::INFINITY, f64::min);
        let got = search_k(5, 2, SearchMode::Exhaustive).unwrap();
        assert!((got.worst_case - truth).abs() < 1e-12);
        let first_optimal = all
            .iter()
            .find(|s| (oracle_worst(5, *s) - truth).abs() < 1e-12)
            .unwrap();
        assert_eq!(got.multipliers, first_optimal.to_vec());
    }

    #[test]
    fn single_multiplier_worst_is_cos_squared_pi_over_p() {
        for p in [3u32, 5, 7, 11, 13] {
            let got = search_k(p, 1, SearchMode::Exhaustive).unwrap();
            assert_eq!(got.multipliers, vec![1]);
            let l = (p - 1) / 2;
            let expected = (2.0 * PI * l as f64 / p as f64).cos().powi(2);
            assert!((got.worst_case - expected).abs() < 1e-12);
            assert!((got.worst_case - (PI / p as f64).cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn random_mode_is_deterministic() {
        let mode = SearchMode::Random {
            trials: 1000,
            seed: 7,
        };
        let a = search_k(11, 4, mode).unwrap();
        let b = search_k(11, 4, mode).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.multipliers.len(), 4);
        assert!((a.worst_case - oracle_worst(11, &a.multipliers)).abs() < 1e-12);
        // random can never beat the exhaustive optimum
        let exact = search_k(11, 4, SearchMode::Exhaustive).unwrap();
        assert!(exact.worst_case <= a.worst_case + 1e-15);
    }

    #[test]
    fn budget_and_arguments() {
        assert!(matches!(
            search_k(101, 8, SearchMode::Exhaustive),
            Err(QfaError::SearchBudgetExceeded { .. })
        ));
        assert!(search_k(
            101,
            8,
            SearchMode::Random {
                trials: 50,
                seed: 1
            }
        )
        .is_ok());
        assert_eq!(search_k(11, 3, SearchMode::Exhaustive).unwrap_err(), QfaError::NotPowerOfTwo(3));
        assert!(matches!(
            search_k(3, 4, SearchMode::Exhaustive),
            Err(QfaError::TooManyMultipliers { .. })
        ));
        assert_eq!(
            search_k(11, 2, SearchMode::Random { trials: 0, seed: 1 }).unwrap_err(),
            QfaError::NoTrials
        );
    }

    #[test]
    fn combinations_are_lexicographic() {
        let c = combinations(4, 2);
        assert_eq!(c, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(combinations(10, 4).len() as u128, binomial(10, 4));
        assert_eq!(binomial(100, 8), 186_087_894_300);
    }
}
