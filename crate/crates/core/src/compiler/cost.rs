// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::circuit::{depth, Circuit};

use super::CompileError;

/// Basis-gate counts and depth of a compiled circuit. Serializes to
/// `{"sx","rz","cx","x","depth","qubits"}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub sx: usize,
    pub rz: usize,
    pub cx: usize,
    pub x: usize,
    pub depth: usize,
    pub qubits: usize,
}

impl CostReport {
    pub fn counts(&self) -> BTreeMap<&'static str, usize> {
        BTreeMap::from([("cx", self.cx), ("rz", self.rz), ("sx", self.sx), ("x", self.x)])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain struct serializes")
    }
}

pub fn cost_report(c: &Circuit) -> Result<CostReport, CompileError> {
    let mut report = CostReport {
        sx: 0,
        rz: 0,
        cx: 0,
        x: 0,
        depth: depth(c),
        qubits: c.num_qubits(),
    };
    for g in c.gates() {
        match g.kind().name() {
            "sx" => report.sx += 1,
            "rz" => report.rz += 1,
            "cx" => report.cx += 1,
            "x" => report.x += 1,
            "measure" => {}
            other => return Err(CompileError::NotBasis(other)),
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{lower, transpile, LoweringRequest, Scheme};

    fn transpiled(scheme: Scheme, k: &[u32], n: usize) -> Circuit {
        let req = LoweringRequest::new(11, k.to_vec(), n, scheme, true).unwrap();
        transpile(&lower(&req).unwrap()).unwrap()
    }

    #[test]
    fn ry_single_unoptimized_counts() {
        let r = cost_report(&transpiled(Scheme::RySingle, &[1], 2)).unwrap();
        assert_eq!((r.sx, r.rz, r.cx, r.x), (4, 4, 0, 0));
    }

    #[test]
    fn rz_single_unoptimized_counts() {
        for j in 0..15 {
            let r = cost_report(&transpiled(Scheme::RzSingle, &[1], j)).unwrap();
            assert_eq!((r.sx, r.rz), (2, j + 2), "j={j}");
        }
    }

    #[test]
    fn opt_schemes_use_44_cx() {
        for scheme in [Scheme::OptRy, Scheme::OptRz] {
            let r = cost_report(&transpiled(scheme, &[3, 5, 7], 11)).unwrap();
            assert_eq!(r.cx, 44, "{scheme}");
            assert_eq!(r.qubits, 3);
        }
    }

    #[test]
    fn json_keys() {
        let r = cost_report(&transpiled(Scheme::RzSingle, &[1], 3)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys.len(), 6);
        for k in ["sx", "rz", "cx", "x", "depth", "qubits"] {
            assert!(v.get(k).is_some(), "{k}");
        }
        assert!(r.depth >= r.counts().values().copied().max().unwrap());
    }

    #[test]
    fn rejects_non_basis() {
        let req = LoweringRequest::new(11, vec![1], 1, Scheme::RySingle, false).unwrap();
        assert_eq!(
            cost_report(&lower(&req).unwrap()).unwrap_err(),
            CompileError::NotBasis("ry")
        );
    }
}
