// SPDX-License-Identifier: Apache-2.0

//! Noise model, its config-file form, and the Kraus channels it induces.
//!
//! Config files are flat TOML documents; every key is optional:
//!
//! ```toml
//! depol_1q = 0.001      # per single-qubit physical gate
//! depol_2q = 0.01       # per cx
//! p01 = 0.02            # P(read 1 | true 0), every bit
//! p10 = 0.02            # P(read 0 | true 1), every bit
//! p01_per_bit = [0.02, 0.03]   # overrides p01 for bits 0, 1
//! p10_per_bit = [0.02, 0.03]
//! t1 = 50000.0          # ns; the four thermal keys come together
//! t2 = 70000.0
//! gate_time_1q = 35.0
//! gate_time_2q = 300.0
//! rz_virtual = true
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Gate, GateKind};
use crate::linalg::{c, gates, ComplexMatrix};

use super::SimError;

/// Classical flip probabilities for one measured bit.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Readout {
    /// P(read 1 | true 0)
    pub p01: f64,
    /// P(read 0 | true 1)
    pub p10: f64,
}

/// Relaxation times and gate durations, all in the same unit (ns in files).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thermal {
    pub t1: f64,
    pub t2: f64,
    pub gate_time_1q: f64,
    pub gate_time_2q: f64,
}

impl Thermal {
    /// Amplitude- and phase-damping parameters `(γ, λ)` for a gate lasting
    /// `t`: coherences decay as `e^{−t/T2}` in total.
    pub fn damping(&self, t: f64) -> (f64, f64) {
        let gamma = 1.0 - (-t / self.t1).exp();
        let lambda = 1.0 - (-2.0 * t / self.t2 + t / self.t1).exp();
        (gamma, lambda.max(0.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub depol_1q: f64,
    pub depol_2q: f64,
    pub readout: Readout,
    /// Per-bit readout overrides, indexed by classical bit.
    pub readout_per_bit: Vec<Readout>,
    pub thermal: Option<Thermal>,
    pub rz_virtual: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::ideal()
    }
}

fn check_probability(name: &str, p: f64) -> Result<(), SimError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(SimError::InvalidNoise(format!("{name} = {p} is not in [0, 1]")));
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseFile {
    depol_1q: Option<f64>,
    depol_2q: Option<f64>,
    p01: Option<f64>,
    p10: Option<f64>,
    p01_per_bit: Option<Vec<f64>>,
    p10_per_bit: Option<Vec<f64>>,
    t1: Option<f64>,
    t2: Option<f64>,
    gate_time_1q: Option<f64>,
    gate_time_2q: Option<f64>,
    rz_virtual: Option<bool>,
}

impl NoiseModel {
    /// No noise at all; RZ virtual.
    pub fn ideal() -> Self {
        Self {
            depol_1q: 0.0,
            depol_2q: 0.0,
            readout: Readout::default(),
            readout_per_bit: Vec::new(),
            thermal: None,
            rz_virtual: true,
        }
    }

    pub fn depolarizing(depol_1q: f64, depol_2q: f64) -> Result<Self, SimError> {
        let m = Self {
            depol_1q,
            depol_2q,
            ..Self::ideal()
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        check_probability("depol_1q", self.depol_1q)?;
        check_probability("depol_2q", self.depol_2q)?;
        check_probability("p01", self.readout.p01)?;
        check_probability("p10", self.readout.p10)?;
        for (i, r) in self.readout_per_bit.iter().enumerate() {
            check_probability(&format!("p01[{i}]"), r.p01)?;
            check_probability(&format!("p10[{i}]"), r.p10)?;
        }
        if let Some(th) = &self.thermal {
            for (name, v) in [("t1", th.t1), ("t2", th.t2)] {
                if !(v.is_finite() && v > 0.0) {
                    return Err(SimError::InvalidNoise(format!("{name} = {v} must be positive")));
                }
            }
            for (name, v) in [("gate_time_1q", th.gate_time_1q), ("gate_time_2q", th.gate_time_2q)] {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(SimError::InvalidNoise(format!("{name} = {v} must be non-negative")));
                }
            }
            if th.t2 > 2.0 * th.t1 {
                return Err(SimError::InvalidNoise(format!(
                    "t2 = {} exceeds 2·t1 = {}",
                    th.t2,
                    2.0 * th.t1
                )));
            }
        }
        Ok(())
    }

    /// Readout flips for classical bit `bit`.
    pub fn readout_for(&self, bit: usize) -> Readout {
        self.readout_per_bit.get(bit).copied().unwrap_or(self.readout)
    }

    pub fn has_readout_error(&self) -> bool {
        let flips = |r: &Readout| r.p01 > 0.0 || r.p10 > 0.0;
        flips(&self.readout) || self.readout_per_bit.iter().any(flips)
    }

    /// Whether `gate` is a physical operation that attracts noise.
    pub fn is_noisy_gate(&self, gate: &Gate) -> bool {
        match gate.kind() {
            GateKind::Measure(_) => false,
            GateKind::Rz(_) => !self.rz_virtual,
            _ => true,
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self, SimError> {
        let f: NoiseFile = toml::from_str(text).map_err(|e| SimError::Config(e.to_string()))?;
        let readout = Readout {
            p01: f.p01.unwrap_or(0.0),
            p10: f.p10.unwrap_or(0.0),
        };
        let p01s = f.p01_per_bit.unwrap_or_default();
        let p10s = f.p10_per_bit.unwrap_or_default();
        let n = p01s.len().max(p10s.len());
        let readout_per_bit = (0..n)
            .map(|i| Readout {
                p01: p01s.get(i).copied().unwrap_or(readout.p01),
                p10: p10s.get(i).copied().unwrap_or(readout.p10),
            })
            .collect();
        let thermal = match (f.t1, f.t2, f.gate_time_1q, f.gate_time_2q) {
            (None, None, None, None) => None,
            (Some(t1), Some(t2), Some(gate_time_1q), Some(gate_time_2q)) => Some(Thermal {
                t1,
                t2,
                gate_time_1q,
                gate_time_2q,
            }),
            _ => {
                return Err(SimError::Config(
                    "t1, t2, gate_time_1q and gate_time_2q must be given together".into(),
                ))
            }
        };
        let m = Self {
            depol_1q: f.depol_1q.unwrap_or(0.0),
            depol_2q: f.depol_2q.unwrap_or(0.0),
            readout,
            readout_per_bit,
            thermal,
            rz_virtual: f.rz_virtual.unwrap_or(true),
        };
        m.validate()?;
        Ok(m)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, SimError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| SimError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Channels that follow `gate`, in application order.
    pub fn channels_for(&self, gate: &Gate) -> Vec<(Vec<usize>, KrausSet)> {
        if !self.is_noisy_gate(gate) {
            return Vec::new();
        }
        let qubits = gate.qubits();
        let mut out = Vec::new();
        if qubits.len() == 2 {
            if self.depol_2q > 0.0 {
                out.push((qubits.to_vec(), KrausSet::depolarizing_2q(self.depol_2q)));
            }
        } else if self.depol_1q > 0.0 {
            out.push((qubits.to_vec(), KrausSet::depolarizing_1q(self.depol_1q)));
        }
        if let Some(th) = &self.thermal {
            let t = if qubits.len() == 2 {
                th.gate_time_2q
            } else {
                th.gate_time_1q
            };
            let (gamma, lambda) = th.damping(t);
            for &q in qubits {
                if gamma > 0.0 {
                    out.push((vec![q], KrausSet::amplitude_damping(gamma)));
                }
                if lambda > 0.0 {
                    out.push((vec![q], KrausSet::phase_damping(lambda)));
                }
            }
        }
        out
    }
}

/// A channel on `arity` qubits. Each operator is a tensor product of 2x2
/// factors; factor `j` acts on the `j`-th qubit the channel is applied to.
#[derive(Debug, Clone)]
pub struct KrausSet {
    arity: usize,
    ops: Vec<Vec<ComplexMatrix>>,
}

fn paulis() -> [ComplexMatrix; 4] {
    let y = ComplexMatrix::mat2(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0));
    let z = ComplexMatrix::diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]);
    [ComplexMatrix::identity(2), gates::x(), y, z]
}

impl KrausSet {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ops(&self) -> &[Vec<ComplexMatrix>] {
        &self.ops
    }

    /// `ρ → (1−q)ρ + q·I/2`.
    pub fn depolarizing_1q(q: f64) -> Self {
        let [i, x, y, z] = paulis();
        let w0 = Complex64::from((1.0 - 0.75 * q).sqrt());
        let w = Complex64::from((q / 4.0).sqrt());
        Self {
            arity: 1,
            ops: vec![vec![i.scale(w0)], vec![x.scale(w)], vec![y.scale(w)], vec![z.scale(w)]],
        }
    }

    /// `ρ → (1−q)ρ + q·I/4` on a qubit pair, as a 16-term Pauli twirl.
    pub fn depolarizing_2q(q: f64) -> Self {
        let ps = paulis();
        let w0 = Complex64::from((1.0 - 15.0 * q / 16.0).sqrt());
        let w = Complex64::from((q / 16.0).sqrt());
        let mut ops = Vec::with_capacity(16);
        for a in 0..4 {
            for b in 0..4 {
                let weight = if a == 0 && b == 0 { w0 } else { w };
                ops.push(vec![ps[a].scale(weight), ps[b].clone()]);
            }
        }
        Self { arity: 2, ops }
    }

    pub fn amplitude_damping(gamma: f64) -> Self {
        let z = c(0.0, 0.0);
        let k0 = ComplexMatrix::mat2(c(1.0, 0.0), z, z, c((1.0 - gamma).sqrt(), 0.0));
        let k1 = ComplexMatrix::mat2(z, c(gamma.sqrt(), 0.0), z, z);
        Self {
            arity: 1,
            ops: vec![vec![k0], vec![k1]],
        }
    }

    pub fn phase_damping(lambda: f64) -> Self {
        let z = c(0.0, 0.0);
        let k0 = ComplexMatrix::mat2(c(1.0, 0.0), z, z, c((1.0 - lambda).sqrt(), 0.0));
        let k1 = ComplexMatrix::mat2(z, z, z, c(lambda.sqrt(), 0.0));
        Self {
            arity: 1,
            ops: vec![vec![k0], vec![k1]],
        }
    }

    /// Full `2^arity` matrix of operator `i` (factor 0 on the lowest bit).
    pub fn matrix(&self, i: usize) -> ComplexMatrix {
        self.ops[i]
            .iter()
            .rev()
            .fold(ComplexMatrix::identity(1), |acc, f| acc.kron(f))
    }

    /// `‖Σ K†K − I‖_max`.
    pub fn completeness_deviation(&self) -> f64 {
        let dim = 1usize << self.arity;
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for i in 0..self.ops.len() {
            let k = self.matrix(i);
            let kk = &k.adjoint() * &k;
            for (s, v) in sum.as_mut_slice().iter_mut().zip(kk.as_slice()) {
                *s += v;
            }
        }
        sum.max_abs_diff(&ComplexMatrix::identity(dim)).expect("same size")
    }
}
