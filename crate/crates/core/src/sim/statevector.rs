// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::circuit::{apply_local, Circuit};
use crate::linalg::{cis, StateVector};

use super::{ensure_width, marginalize, readout_layout, SimError, MAX_STATE_QUBITS};

/// Result of an exact run: the state just before measurement and the
/// outcome distribution over classical-bit strings.
#[derive(Debug, Clone)]
pub struct StateRun {
    pub state: StateVector,
    pub outcome_probs: BTreeMap<String, f64>,
}

impl StateRun {
    /// Probability that every measured bit reads 0.
    pub fn acceptance(&self) -> f64 {
        super::all_zero_probability(&self.outcome_probs)
    }
}

/// Runs `c` on `|0…0⟩`. Measurements are deferred to the end, which is
/// exact because they are terminal on their qubits.
pub fn simulate_state(c: &Circuit) -> Result<StateRun, SimError> {
    ensure_width(c, MAX_STATE_QUBITS)?;
    let dim = 1usize << c.num_qubits();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[0] = Complex64::new(1.0, 0.0);
    for op in c.gates().iter().filter_map(|g| g.local_op()) {
        apply_local(&mut amps, 1, &op);
    }
    if c.global_phase() != 0.0 {
        let f = cis(c.global_phase());
        amps.iter_mut().for_each(|a| *a *= f);
    }
    let state = StateVector::from_evolved(amps);
    let outcome_probs = marginalize(&state.probabilities(), &readout_layout(c));
    Ok(StateRun {
        state,
        outcome_probs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{unitary_of, GateKind};
    use crate::compiler::{compile, LoweringRequest, Scheme};
    use crate::qfa;

    #[test]
    fn empty_circuit_stays_in_ground_state() {
        let run = simulate_state(&Circuit::new(2).unwrap()).unwrap();
        assert_eq!(run.outcome_probs.len(), 1);
        assert_eq!(run.outcome_probs["00"], 1.0);
    }

    #[test]
    fn matches_first_column_of_unitary() {
        let mut c = Circuit::new(3).unwrap();
        c.push(GateKind::H, &[0]).unwrap();
        c.push(GateKind::Cry(0.7), &[0, 2]).unwrap();
        c.push(GateKind::Rz(1.1), &[2]).unwrap();
        c.push(GateKind::Cx, &[2, 1]).unwrap();
        c.set_global_phase(0.4).unwrap();
        let u = unitary_of(&c).unwrap().matrix;
        let run = simulate_state(&c).unwrap();
        for r in 0..8 {
            assert!((run.state.amplitude(r) - u[(r, 0)]).norm() < 1e-14);
        }
    }

    #[test]
    fn rz_single_returns_to_zero_after_p_letters() {
        let req = LoweringRequest::new(11, vec![1], 11, Scheme::RzSingle, true).unwrap();
        let run = simulate_state(&compile(&req, true).unwrap().circuit).unwrap();
        assert!((run.outcome_probs["0"] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ry_single_four_letters() {
        let req = LoweringRequest::new(11, vec![1], 4, Scheme::RySingle, true).unwrap();
        let run = simulate_state(&compile(&req, true).unwrap().circuit).unwrap();
        let oracle = (8.0 * std::f64::consts::PI / 11.0).cos().powi(2);
        assert!((run.acceptance() - oracle).abs() < 1e-12);
        assert!((run.acceptance() - qfa::two_state_closed_form(11, 1, 4).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn too_wide_is_rejected() {
        let c = Circuit::new(13).unwrap();
        assert!(matches!(simulate_state(&c), Err(SimError::TooWide { width: 13, .. })));
    }
}
