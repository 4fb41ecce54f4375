// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{apply_local, apply_local_right_adjoint, Circuit, LocalOp};
use crate::linalg::{ComplexMatrix, StateVector};

use super::noise::{KrausSet, NoiseModel};
use super::{ensure_width, marginalize, readout_layout, SimError, MAX_DENSITY_QUBITS};

/// Tolerances of the density-matrix invariants.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;

/// `2^n × 2^n` density operator, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    num_qubits: usize,
    data: Vec<Complex64>,
}

pub(crate) fn to_dmatrix(dim: usize, data: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_row_slice(dim, dim, data)
}

impl DensityMatrix {
    /// `|0…0⟩⟨0…0|`.
    pub fn ground(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        data[0] = Complex64::new(1.0, 0.0);
        Self { num_qubits, data }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let m = psi.projector();
        Self {
            num_qubits: psi.dim().trailing_zeros() as usize,
            data: m.as_slice().to_vec(),
        }
    }

    pub fn maximally_mixed(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = w;
        }
        Self { num_qubits, data }
    }

    /// Wraps a matrix after checking the density-matrix invariants.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self, SimError> {
        let (rows, cols) = m.dim();
        if rows != cols || !rows.is_power_of_two() {
            return Err(SimError::InvalidDensity(format!("shape {rows}x{cols}")));
        }
        let rho = Self {
            num_qubits: rows.trailing_zeros() as usize,
            data: m.as_slice().to_vec(),
        };
        rho.check_invariants()?;
        Ok(rho)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.num_qubits
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim() + c]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = self.dim();
        ComplexMatrix::from_row_major(dim, dim, self.data.clone()).expect("square buffer")
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.entry(i, i)).sum()
    }

    /// Computational-basis probabilities.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.entry(i, i).re).collect()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst: f64 = 0.0;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((self.entry(r, c) - self.entry(c, r).conj()).norm());
            }
        }
        worst
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let eig = SymmetricEigen::new(to_dmatrix(self.dim(), &self.data));
        let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        v.sort_by(f64::total_cmp);
        v
    }

    /// Hermitian, unit trace, positive semidefinite.
    pub fn check_invariants(&self) -> Result<(), SimError> {
        let h = self.hermiticity_deviation();
        if h > HERMITIAN_TOL {
            return Err(SimError::InvalidDensity(format!("not Hermitian ({h:e})")));
        }
        let t = self.trace();
        if (t - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(SimError::InvalidDensity(format!("trace {t}")));
        }
        let min = self.eigenvalues()[0];
        if min < -POSITIVITY_TOL {
            return Err(SimError::InvalidDensity(format!("eigenvalue {min:e}")));
        }
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64, SimError> {
        if self.dim() != other.dim() {
            return Err(SimError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Outcome distribution of `c`'s measurements read from the diagonal.
    pub fn outcome_probs(&self, c: &Circuit) -> BTreeMap<String, f64> {
        let probs: Vec<f64> = self.diagonal().into_iter().map(|p| p.max(0.0)).collect();
        marginalize(&probs, &readout_layout(c))
    }

    fn conjugate(&mut self, op: &LocalOp) {
        let dim = self.dim();
        apply_local(&mut self.data, dim, op);
        apply_local_right_adjoint(&mut self.data, dim, op);
    }

    /// `ρ → Σ K ρ K†` with the channel on `qubits`.
    pub fn apply_channel(&mut self, qubits: &[usize], channel: &KrausSet) {
        assert_eq!(qubits.len(), channel.arity(), "channel arity");
        let mut acc = vec![Complex64::new(0.0, 0.0); self.data.len()];
        for factors in channel.ops() {
            let mut term = self.clone();
            for (&q, f) in qubits.iter().zip(factors) {
                term.conjugate(&LocalOp::new(None, q, f));
            }
            for (a, t) in acc.iter_mut().zip(&term.data) {
                *a += t;
            }
        }
        self.data = acc;
    }
}

/// Evolves `|0…0⟩⟨0…0|` through `c`, applying each gate's noise channels
/// right after it. Measurements are skipped; readout error belongs to
/// sampling.
pub fn simulate_density(c: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix, SimError> {
    ensure_width(c, MAX_DENSITY_QUBITS)?;
    noise.validate()?;
    let mut rho = DensityMatrix::ground(c.num_qubits());
    for gate in c.gates() {
        let Some(op) = gate.local_op() else { continue };
        rho.conjugate(&op);
        for (qubits, channel) in noise.channels_for(gate) {
            rho.apply_channel(&qubits, &channel);
        }
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::sim::{fidelity, simulate_state};

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new(3).unwrap();
        c.push(GateKind::H, &[0]).unwrap();
        c.push(GateKind::Cx, &[0, 1]).unwrap();
        c.push(GateKind::Ry(0.4), &[2]).unwrap();
        c.push(GateKind::Crz(1.2), &[2, 0]).unwrap();
        c.push(GateKind::Sx, &[1]).unwrap();
        c
    }

    #[test]
    fn noiseless_matches_pure_state() {
        let c = sample_circuit();
        let rho = simulate_density(&c, &NoiseModel::ideal()).unwrap();
        let pure = DensityMatrix::from_pure(&simulate_state(&c).unwrap().state);
        assert!(rho.max_abs_diff(&pure).unwrap() < 1e-12);
    }

    #[test]
    fn full_depolarization_is_maximally_mixed() {
        let mut c = Circuit::new(1).unwrap();
        c.push(GateKind::Ry(0.9), &[0]).unwrap();
        c.push(GateKind::Sx, &[0]).unwrap();
        let rho = simulate_density(&c, &NoiseModel::depolarizing(1.0, 0.0).unwrap()).unwrap();
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(1)).unwrap() < 1e-12);
    }

    #[test]
    fn two_qubit_depolarizing_matches_definition() {
        // ρ → (1−q)ρ + q·Tr₀₁(ρ) ⊗ I/4 on a 2-qubit register
        let mut c = Circuit::new(2).unwrap();
        c.push(GateKind::H, &[0]).unwrap();
        c.push(GateKind::Ry(0.3), &[1]).unwrap();
        let before = simulate_density(&c, &NoiseModel::ideal()).unwrap();
        c.push(GateKind::Cx, &[0, 1]).unwrap();
        let q = 0.2;
        let noisy = simulate_density(&c, &NoiseModel::depolarizing(0.0, q).unwrap()).unwrap();
        let ideal = simulate_density(&c, &NoiseModel::ideal()).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let mixed = if r == col { 0.25 } else { 0.0 };
                let expect = ideal.entry(r, col) * (1.0 - q) + Complex64::new(q * mixed, 0.0);
                assert!((noisy.entry(r, col) - expect).norm() < 1e-12);
            }
        }
        before.check_invariants().unwrap();
    }

    #[test]
    fn single_qubit_depolarizing_closed_form() {
        for q in [0.001, 0.01, 0.1] {
            for g in 1..=10 {
                let mut c = Circuit::new(1).unwrap();
                for i in 0..g {
                    c.push(if i % 2 == 0 { GateKind::Sx } else { GateKind::Ry(0.7) }, &[0])
                        .unwrap();
                    c.push(GateKind::Rz(0.3), &[0]).unwrap();
                }
                let psi = simulate_state(&c).unwrap().state;
                let rho = simulate_density(&c, &NoiseModel::depolarizing(q, 0.0).unwrap()).unwrap();
                let f = fidelity(&psi, &rho).unwrap();
                let oracle = (1.0 + (1.0 - q).powi(g)) / 2.0;
                assert!((f - oracle).abs() < 1e-10, "q={q} g={g}");
            }
        }
    }

    #[test]
    fn amplitude_damping_decays_excited_population() {
        let mut c = Circuit::new(1).unwrap();
        c.push(GateKind::X, &[0]).unwrap();
        let noise = NoiseModel {
            thermal: Some(crate::sim::Thermal {
                t1: 100.0,
                t2: 200.0,
                gate_time_1q: 10.0,
                gate_time_2q: 10.0,
            }),
            ..NoiseModel::ideal()
        };
        let rho = simulate_density(&c, &noise).unwrap();
        let p1 = rho.entry(1, 1).re;
        assert!((p1 - (-0.1f64).exp()).abs() < 1e-12);
        rho.check_invariants().unwrap();
    }

    #[test]
    fn width_limit() {
        let c = Circuit::new(9).unwrap();
        assert!(matches!(
            simulate_density(&c, &NoiseModel::ideal()),
            Err(SimError::TooWide { width: 9, limit: 8 })
        ));
    }

    #[test]
    fn invalid_noise_rejected() {
        let bad = NoiseModel {
            depol_1q: 2.0,
            ..NoiseModel::ideal()
        };
        assert!(matches!(
            simulate_density(&sample_circuit(), &bad),
            Err(SimError::InvalidNoise(_))
        ));
    }
}
