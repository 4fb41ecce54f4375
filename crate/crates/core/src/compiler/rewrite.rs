// SPDX-License-Identifier: Apache-2.0

//! Rewrite rules from the IR gate set into the basis `{CX, RZ, SX, X}`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use crate::circuit::{equiv_global_phase, unitary_of, Circuit, Gate, GateKind};

use super::CompileError;

type Replacement = (Vec<(GateKind, Vec<usize>)>, f64);

/// One decomposition `G = e^{iφ} · (replacement)`, applied to gates whose
/// mnemonic matches.
pub struct RewriteRule {
    name: &'static str,
    sample: fn(f64) -> GateKind,
    expand: fn(GateKind, &[usize]) -> Replacement,
}

impl RewriteRule {
    /// Mnemonic of the gate this rule eliminates.
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn applies_to(&self, kind: &GateKind) -> bool {
        kind.name() == self.name
    }

    /// Replacement gates and the global phase they leave behind.
    pub fn rewrite(&self, gate: &Gate) -> (Vec<Gate>, f64) {
        let (parts, phase) = (self.expand)(gate.kind(), gate.qubits());
        let gates = parts
            .into_iter()
            .map(|(k, q)| Gate::new(k, &q).expect("rule emits well-formed gates"))
            .collect();
        (gates, phase)
    }

    /// Original and rewritten circuits for an instance with the given angle,
    /// on the smallest width that fits (control 1, target 0).
    pub fn instance(&self, angle: f64) -> (Circuit, Circuit) {
        let kind = (self.sample)(angle);
        let qubits: &[usize] = if kind.arity() == 2 { &[1, 0] } else { &[0] };
        let gate = Gate::new(kind, qubits).expect("sample gate");
        let original = Circuit::from_gates(kind.arity(), [gate.clone()], 0.0).expect("fits");
        let (parts, phase) = self.rewrite(&gate);
        let rewritten = Circuit::from_gates(kind.arity(), parts, phase).expect("fits");
        (original, rewritten)
    }

    /// `‖U_original − e^{iφ}·U_replacement‖_max` with the rule's own phase.
    pub fn deviation(&self, angle: f64) -> f64 {
        let (a, b) = self.instance(angle);
        let ua = unitary_of(&a).expect("small").matrix;
        let ub = unitary_of(&b).expect("small").matrix;
        ua.max_abs_diff(&ub).expect("same width")
    }

    /// Equivalence up to an arbitrary global phase.
    pub fn equivalent(&self, angle: f64, tol: f64) -> bool {
        let (a, b) = self.instance(angle);
        let ua = unitary_of(&a).expect("small").matrix;
        let ub = unitary_of(&b).expect("small").matrix;
        equiv_global_phase(&ua, &ub, tol).expect("same width")
    }
}

fn angle_of(kind: GateKind) -> f64 {
    kind.angle().unwrap_or(0.0)
}

fn registry() -> Vec<RewriteRule> {
    vec![
        RewriteRule {
            name: "ry",
            sample: GateKind::Ry,
            expand: |k, q| {
                let t = angle_of(k);
                (
                    vec![
                        (GateKind::Sx, q.to_vec()),
                        (GateKind::Rz(t + PI), q.to_vec()),
                        (GateKind::Sx, q.to_vec()),
                        (GateKind::Rz(PI), q.to_vec()),
                    ],
                    FRAC_PI_2,
                )
            },
        },
        RewriteRule {
            name: "sxdg",
            sample: |_| GateKind::Sxdg,
            expand: |_, q| {
                (
                    vec![
                        (GateKind::Rz(PI), q.to_vec()),
                        (GateKind::Sx, q.to_vec()),
                        (GateKind::Rz(PI), q.to_vec()),
                    ],
                    FRAC_PI_2,
                )
            },
        },
        RewriteRule {
            name: "h",
            sample: |_| GateKind::H,
            expand: |_, q| {
                (
                    vec![
                        (GateKind::Rz(FRAC_PI_2), q.to_vec()),
                        (GateKind::Sx, q.to_vec()),
                        (GateKind::Rz(FRAC_PI_2), q.to_vec()),
                    ],
                    FRAC_PI_4,
                )
            },
        },
        RewriteRule {
            name: "crz",
            sample: GateKind::Crz,
            expand: |k, q| {
                let t = angle_of(k);
                let target = vec![q[1]];
                (
                    vec![
                        (GateKind::Rz(t / 2.0), target.clone()),
                        (GateKind::Cx, q.to_vec()),
                        (GateKind::Rz(-t / 2.0), target),
                        (GateKind::Cx, q.to_vec()),
                    ],
                    0.0,
                )
            },
        },
        RewriteRule {
            name: "cry",
            sample: GateKind::Cry,
            expand: |k, q| {
                let t = angle_of(k);
                let target = vec![q[1]];
                (
                    vec![
                        (GateKind::Ry(t / 2.0), target.clone()),
                        (GateKind::Cx, q.to_vec()),
                        (GateKind::Ry(-t / 2.0), target),
                        (GateKind::Cx, q.to_vec()),
                    ],
                    0.0,
                )
            },
        },
    ]
}

/// The rule registry. Every rule is checked against its unitary on a few
/// angles the first time the registry is touched.
pub fn rewrite_rules() -> &'static [RewriteRule] {
    static RULES: OnceLock<Vec<RewriteRule>> = OnceLock::new();
    RULES.get_or_init(|| {
        let rules = registry();
        for rule in &rules {
            for angle in [0.0, 1.0, -2.5, 4.0 * PI / 11.0] {
                let dev = rule.deviation(angle);
                assert!(dev < 1e-10, "rewrite rule `{}` is unsound at {angle}: {dev:e}", rule.name);
            }
        }
        rules
    })
}

/// Rewrites every gate into the basis set, accumulating the global phase.
/// Gate order is preserved.
pub fn transpile(c: &Circuit) -> Result<Circuit, CompileError> {
    let rules = rewrite_rules();
    let mut out = Circuit::new(c.num_qubits())?;
    out.set_global_phase(c.global_phase())?;
    let mut phase = 0.0;
    // depth-first so replacements keep their position in the gate order
    let mut stack: Vec<Gate> = c.gates().iter().rev().cloned().collect();
    while let Some(gate) = stack.pop() {
        let kind = gate.kind();
        if kind.is_basis() {
            out.push_gate(gate)?;
            continue;
        }
        let rule = rules
            .iter()
            .find(|r| r.applies_to(&kind))
            .ok_or(CompileError::NoRewriteRule(kind.name()))?;
        let (parts, delta) = rule.rewrite(&gate);
        phase += delta;
        stack.extend(parts.into_iter().rev());
    }
    out.add_global_phase(phase);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::gate_counts;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn every_rule_holds_on_random_angles() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for rule in rewrite_rules() {
            for _ in 0..100 {
                let angle = rng.random_range(-4.0 * PI..4.0 * PI);
                assert!(rule.equivalent(angle, 1e-10), "{} at {angle}", rule.name());
                assert!(rule.deviation(angle) < 1e-10, "{} phase at {angle}", rule.name());
            }
        }
    }

    #[test]
    fn ry_matches_figure_sequence() {
        let mut c = Circuit::new(1).unwrap();
        c.push(GateKind::Ry(4.0 * PI / 11.0), &[0]).unwrap();
        let t = transpile(&c).unwrap();
        let kinds: Vec<_> = t.gates().iter().map(|g| g.kind()).collect();
        let expected = [15.0 * PI / 11.0, PI];
        assert_eq!(kinds.len(), 4);
        assert_eq!((kinds[0], kinds[2]), (GateKind::Sx, GateKind::Sx));
        for (k, want) in [kinds[1], kinds[3]].into_iter().zip(expected) {
            let GateKind::Rz(t) = k else { panic!("expected rz, got {k:?}") };
            assert!((t - want).abs() < 1e-14, "{t} vs {want}");
        }
    }

    #[test]
    fn crz_random_angles_on_two_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let theta = rng.random_range(-10.0..10.0);
            let mut c = Circuit::new(2).unwrap();
            c.push(GateKind::Crz(theta), &[0, 1]).unwrap();
            let t = transpile(&c).unwrap();
            assert!(t.gates().iter().all(|g| g.kind().is_basis()));
            let a = unitary_of(&c).unwrap().matrix;
            let b = unitary_of(&t).unwrap().matrix;
            assert!(equiv_global_phase(&a, &b, 1e-10).unwrap());
        }
    }

    #[test]
    fn cry_expands_fully_into_basis() {
        let mut c = Circuit::new(2).unwrap();
        c.push(GateKind::Cry(0.8), &[1, 0]).unwrap();
        let t = transpile(&c).unwrap();
        let counts = gate_counts(&t);
        assert_eq!(counts["sx"], 4);
        assert_eq!(counts["rz"], 4);
        assert_eq!(counts["cx"], 2);
        let a = unitary_of(&c).unwrap().matrix;
        let b = unitary_of(&t).unwrap().matrix;
        assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
    }

    #[test]
    fn basis_only_circuit_is_unchanged() {
        let mut c = Circuit::new(2).unwrap();
        c.push(GateKind::X, &[0]).unwrap();
        c.push(GateKind::Cx, &[0, 1]).unwrap();
        c.push(GateKind::Rz(0.3), &[1]).unwrap();
        c.push(GateKind::Measure(0), &[1]).unwrap();
        assert_eq!(transpile(&c).unwrap(), c);
        let empty = Circuit::new(3).unwrap();
        assert_eq!(transpile(&empty).unwrap(), empty);
    }
}
