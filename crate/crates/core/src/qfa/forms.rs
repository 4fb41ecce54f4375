// SPDX-License-Identifier: Apache-2.0

//! Closed-form acceptance probabilities and state-count bounds.

use super::{
    ensure_multiplier, ensure_odd_prime, ensure_power_of_two, rotation_angle, QfaError,
};

fn check_multipliers(p: u32, multipliers: &[u32]) -> Result<(), QfaError> {
    ensure_odd_prime(p)?;
    if multipliers.is_empty() {
        return Err(QfaError::EmptyMultipliers);
    }
    multipliers.iter().try_for_each(|&k| ensure_multiplier(p, k))
}

/// `cos²(2πkl/p)`: acceptance of the two-state machine with multiplier `k`.
pub fn two_state_closed_form(p: u32, k: u32, l: u64) -> Result<f64, QfaError> {
    ensure_odd_prime(p)?;
    ensure_multiplier(p, k)?;
    Ok(rotation_angle(p, k as u64 * l).cos().powi(2))
}

/// `((1/d) Σ_j cos(2π k_j l / p))²`: exact acceptance of the parallel
/// machine, whose accepting amplitude is the average of the branch
/// amplitudes after `U_$` recombines them.
pub fn parallel_interference_form(p: u32, multipliers: &[u32], l: u64) -> Result<f64, QfaError> {
    check_multipliers(p, multipliers)?;
    ensure_power_of_two(multipliers.len())?;
    Ok(interference(p, multipliers, l))
}

pub(crate) fn interference(p: u32, multipliers: &[u32], l: u64) -> f64 {
    let mean = multipliers
        .iter()
        .map(|&k| rotation_angle(p, k as u64 * l).cos())
        .sum::<f64>()
        / multipliers.len() as f64;
    (mean * mean).min(1.0)
}

/// `(1/d²) Σ_j cos²(2π k_j l / p)` for any nonempty `K`, as published for
/// non-member lengths. This is a formula only; for `l ≡ 0 (mod p)` it gives
/// `1/d`, not 1.
pub fn averaged_closed_form(p: u32, multipliers: &[u32], l: u64) -> Result<f64, QfaError> {
    check_multipliers(p, multipliers)?;
    let d = multipliers.len() as f64;
    Ok(multipliers
        .iter()
        .map(|&k| rotation_angle(p, k as u64 * l).cos().powi(2))
        .sum::<f64>()
        / (d * d))
}

/// Sub-automaton count and total state bound for a target error `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ErrorBound {
    /// `⌈2·log₂ p / ε⌉`, rounded up to a power of two.
    pub sub_automata: usize,
    /// `⌈(4/ε)·log₂(2p)⌉`.
    pub state_bound: usize,
}

pub fn states_for_error(p: u32, epsilon: f64) -> Result<ErrorBound, QfaError> {
    ensure_odd_prime(p)?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(QfaError::ErrorBoundOutOfRange(epsilon));
    }
    let p = p as f64;
    let d = (2.0 * p.log2() / epsilon).ceil() as usize;
    Ok(ErrorBound {
        sub_automata: d.max(1).next_power_of_two(),
        state_bound: ((4.0 / epsilon) * (2.0 * p).log2()).ceil() as usize,
    })
}
