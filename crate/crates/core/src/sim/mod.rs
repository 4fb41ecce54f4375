// SPDX-License-Identifier: Apache-2.0

//! Exact and noisy execution of circuits, shot sampling, fidelity and
//! length sweeps.

mod density;
mod fidelity;
mod noise;
mod sampling;
mod statevector;
mod sweep;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::circuit::{Circuit, CircuitError};
use crate::compiler::CompileError;
use crate::linalg::LinalgError;

pub use density::{simulate_density, DensityMatrix};
pub use fidelity::{fidelity, fidelity_general};
pub use noise::{KrausSet, NoiseModel, Readout, Thermal};
pub use sampling::{sample_counts, Counts};
pub use statevector::{simulate_state, StateRun};
pub use sweep::{sweep, to_csv, to_json_lines, SweepOptions, SweepRow, CSV_HEADER};

/// Widest circuit `simulate_state` accepts.
pub const MAX_STATE_QUBITS: usize = 12;
/// Widest circuit `simulate_density` accepts (256 × 256 matrices).
pub const MAX_DENSITY_QUBITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("circuit has {width} qubits, simulator limit is {limit}")]
    TooWide { width: usize, limit: usize },
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),
    #[error("noise config: {0}")]
    Config(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("fidelity has imaginary part {0:e}")]
    ComplexFidelity(f64),
    #[error("shots must be at least 1")]
    NoShots,
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn ensure_width(c: &Circuit, limit: usize) -> Result<(), SimError> {
    if c.num_qubits() > limit {
        return Err(SimError::TooWide {
            width: c.num_qubits(),
            limit,
        });
    }
    Ok(())
}

/// `(qubit, classical bit)` pairs that define the outcome strings; every
/// qubit maps to its own index when the circuit measures nothing.
pub(crate) fn readout_layout(c: &Circuit) -> Vec<(usize, usize)> {
    let m = c.measurements();
    if m.is_empty() {
        (0..c.num_qubits()).map(|q| (q, q)).collect()
    } else {
        m
    }
}

/// Marginal distribution over classical-bit strings, most significant bit
/// first. Unwritten classical bits read 0; impossible outcomes are omitted.
pub(crate) fn marginalize(probs: &[f64], layout: &[(usize, usize)]) -> BTreeMap<String, f64> {
    let width = layout.iter().map(|&(_, c)| c + 1).max().unwrap_or(0);
    let mut out = BTreeMap::new();
    for (index, &p) in probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let mut bits = vec![b'0'; width];
        for &(q, cbit) in layout {
            if index >> q & 1 == 1 {
                bits[width - 1 - cbit] = b'1';
            }
        }
        let key = String::from_utf8(bits).expect("ascii");
        *out.entry(key).or_insert(0.0) += p;
    }
    out
}

/// Probability that every measured bit reads 0.
pub fn all_zero_probability(outcomes: &BTreeMap<String, f64>) -> f64 {
    outcomes
        .iter()
        .filter(|(k, _)| k.bytes().all(|b| b == b'0'))
        .map(|(_, &p)| p)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;

    #[test]
    fn marginal_orders_msb_first() {
        // P(|q1 q0⟩ = |01⟩) = 1
        let probs = [0.0, 1.0, 0.0, 0.0];
        let all = marginalize(&probs, &[(0, 0), (1, 1)]);
        assert_eq!(all["01"], 1.0);
        let swapped = marginalize(&probs, &[(0, 1), (1, 0)]);
        assert_eq!(swapped["10"], 1.0);
        let only_q1 = marginalize(&probs, &[(1, 0)]);
        assert_eq!(only_q1["0"], 1.0);
    }

    #[test]
    fn layout_defaults_to_identity() {
        let mut c = Circuit::new(3).unwrap();
        assert_eq!(readout_layout(&c), [(0, 0), (1, 1), (2, 2)]);
        c.push(GateKind::Measure(0), &[2]).unwrap();
        assert_eq!(readout_layout(&c), [(2, 0)]);
    }
}
