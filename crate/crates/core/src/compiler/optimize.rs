// SPDX-License-Identifier: Apache-2.0

//! Peephole clean-up of basis-set circuits. Gates are only merged or
//! deleted, never reordered or resynthesized.

use std::f64::consts::{PI, TAU};

use crate::circuit::{Circuit, Gate, GateKind};

/// Angles within this distance of a multiple of `2π` are snapped.
const ANGLE_EPS: f64 = 1e-12;

/// Which rewrites `optimize_with` may use. The first two preserve the
/// circuit unitary exactly (the dropped phase is tracked); the last two only
/// preserve the measured distribution of runs that start in `|0…0⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OptimizeOptions {
    pub merge_rz: bool,
    pub drop_trivial_rz: bool,
    pub drop_rz_before_measure: bool,
    pub drop_leading_rz: bool,
}

/// Unitary-preserving rewrites only.
impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            merge_rz: true,
            drop_trivial_rz: true,
            drop_rz_before_measure: false,
            drop_leading_rz: false,
        }
    }
}

impl OptimizeOptions {
    /// Every rewrite, including those that assume a `|0…0⟩` input and a
    /// final computational-basis measurement.
    pub fn ground_state() -> Self {
        Self {
            drop_rz_before_measure: true,
            drop_leading_rz: true,
            ..Self::default()
        }
    }
}

/// `optimize_with` the default, unitary-preserving options.
pub fn optimize(c: &Circuit) -> Circuit {
    optimize_with(c, OptimizeOptions::default())
}

/// Reduces `θ` into `[-2π, 2π)`; `rz` has period `4π`.
fn reduce_4pi(theta: f64) -> f64 {
    let r = (theta + TAU).rem_euclid(2.0 * TAU) - TAU;
    if r.is_finite() {
        r
    } else {
        0.0
    }
}

fn rz_angle(g: &Gate) -> Option<f64> {
    match g.kind() {
        GateKind::Rz(t) => Some(t),
        _ => None,
    }
}

/// Next gate after `i` touching `qubit`.
fn next_on(gates: &[Gate], i: usize, qubit: usize) -> Option<usize> {
    (i + 1..gates.len()).find(|&j| gates[j].qubits().contains(&qubit))
}

fn first_on(gates: &[Gate], i: usize, qubit: usize) -> bool {
    !gates[..i].iter().any(|g| g.qubits().contains(&qubit))
}

/// Applies the enabled rewrites until none fires.
pub fn optimize_with(c: &Circuit, opts: OptimizeOptions) -> Circuit {
    let mut gates: Vec<Gate> = c.gates().to_vec();
    let mut phase = c.global_phase();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < gates.len() {
            let Some(theta) = rz_angle(&gates[i]) else {
                i += 1;
                continue;
            };
            let q = gates[i].target();

            if opts.merge_rz {
                if let Some(j) = next_on(&gates, i, q) {
                    if let Some(other) = rz_angle(&gates[j]) {
                        let merged = reduce_4pi(theta + other);
                        gates[i] = Gate::new(GateKind::Rz(merged), &[q]).expect("finite angle");
                        gates.remove(j);
                        changed = true;
                        continue;
                    }
                }
            }

            if opts.drop_trivial_rz {
                let r = reduce_4pi(theta);
                if r.abs() < ANGLE_EPS {
                    gates.remove(i);
                    changed = true;
                    continue;
                }
                // rz(2π) = −I
                if (r.abs() - TAU).abs() < ANGLE_EPS {
                    gates.remove(i);
                    phase += PI;
                    changed = true;
                    continue;
                }
            }

            if opts.drop_rz_before_measure {
                if let Some(j) = next_on(&gates, i, q) {
                    if gates[j].is_measure() {
                        gates.remove(i);
                        changed = true;
                        continue;
                    }
                }
            }

            if opts.drop_leading_rz && first_on(&gates, i, q) {
                // rz(θ)|0⟩ = e^{−iθ/2}|0⟩
                phase -= theta / 2.0;
                gates.remove(i);
                changed = true;
                continue;
            }

            i += 1;
        }
        if !changed {
            break;
        }
    }
    Circuit::from_parts_unchecked(c.num_qubits(), gates, phase)
}
