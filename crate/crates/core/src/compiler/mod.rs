// SPDX-License-Identifier: Apache-2.0

//! Lowering of MOD_p automata to circuits and the basis-gate pipeline
//! `lower → transpile → optimize → cost_report`.

mod cost;
mod optimize;
mod rewrite;

pub use cost::{cost_report, CostReport};
pub use optimize::{optimize, optimize_with, OptimizeOptions};
pub use rewrite::{rewrite_rules, transpile, RewriteRule};

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, CircuitError, GateKind};
use crate::qfa::{self, QfaError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("scheme {scheme} needs {expected} multiplier(s), got {got}")]
    MultiplierCount {
        scheme: Scheme,
        expected: usize,
        got: usize,
    },
    #[error("no rewrite rule lowers `{0}` into the basis set")]
    NoRewriteRule(&'static str),
    #[error("cost reports need a basis-set circuit, found `{0}`")]
    NotBasis(&'static str),
    #[error("unknown scheme `{0}` (expected ry, rz, opt-ry or opt-rz)")]
    UnknownScheme(String),
    #[error(transparent)]
    Qfa(#[from] QfaError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// One qubit, one `ry` per letter.
    RySingle,
    /// One qubit framed by `sx`/`sxdg`, one `rz` per letter.
    RzSingle,
    /// Three qubits, `ry` plus two controlled `ry` per letter.
    OptRy,
    /// Three qubits, `rz` plus two controlled `rz` per letter.
    OptRz,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::RySingle, Scheme::RzSingle, Scheme::OptRy, Scheme::OptRz];

    pub fn multiplier_count(self) -> usize {
        match self {
            Scheme::RySingle | Scheme::RzSingle => 1,
            Scheme::OptRy | Scheme::OptRz => 3,
        }
    }

    pub fn num_qubits(self) -> usize {
        match self {
            Scheme::RySingle | Scheme::RzSingle => 1,
            Scheme::OptRy | Scheme::OptRz => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::RySingle => "ry",
            Scheme::RzSingle => "rz",
            Scheme::OptRy => "opt-ry",
            Scheme::OptRz => "opt-rz",
        }
    }

    pub fn variant(self) -> qfa::Variant {
        match self {
            Scheme::RySingle | Scheme::OptRy => qfa::Variant::PlaneRotation,
            Scheme::RzSingle | Scheme::OptRz => qfa::Variant::PhaseRotation,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = CompileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ry" | "ry-single" => Ok(Scheme::RySingle),
            "rz" | "rz-single" => Ok(Scheme::RzSingle),
            "opt-ry" => Ok(Scheme::OptRy),
            "opt-rz" => Ok(Scheme::OptRz),
            other => Err(CompileError::UnknownScheme(other.to_string())),
        }
    }
}

/// A concrete automaton instance to compile: modulus, multipliers, scheme
/// and word length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoweringRequest {
    p: u32,
    multipliers: Vec<u32>,
    length: usize,
    scheme: Scheme,
    include_measure: bool,
}

impl LoweringRequest {
    pub fn new(
        p: u32,
        multipliers: Vec<u32>,
        length: usize,
        scheme: Scheme,
        include_measure: bool,
    ) -> Result<Self, CompileError> {
        qfa::ensure_odd_prime(p)?;
        if multipliers.len() != scheme.multiplier_count() {
            return Err(CompileError::MultiplierCount {
                scheme,
                expected: scheme.multiplier_count(),
                got: multipliers.len(),
            });
        }
        for &k in &multipliers {
            qfa::ensure_multiplier(p, k)?;
        }
        Ok(Self {
            p,
            multipliers,
            length,
            scheme,
            include_measure,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn multipliers(&self) -> &[u32] {
        &self.multipliers
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn include_measure(&self) -> bool {
        self.include_measure
    }

    /// Same request for another word length.
    pub fn with_length(&self, length: usize) -> Self {
        Self {
            length,
            ..self.clone()
        }
    }

    /// Gate angle for multiplier `k`: `4πk/p`, twice the plane-rotation
    /// angle because `ry`/`rz` use half-angle matrices.
    fn gate_angle(&self, k: u32) -> f64 {
        2.0 * qfa::rotation_angle(self.p, k as u64)
    }

    /// Exact acceptance probability of the automaton this request lowers.
    pub fn ideal_acceptance(&self) -> f64 {
        match self.scheme {
            Scheme::RySingle | Scheme::RzSingle => {
                qfa::two_state_closed_form(self.p, self.multipliers[0], self.length as u64)
                    .expect("validated request")
            }
            Scheme::OptRy | Scheme::OptRz => {
                let eff = effective_multipliers(&self.multipliers, self.p).expect("validated request");
                qfa::interference(self.p, &eff, self.length as u64)
            }
        }
    }
}

/// Per-branch multipliers realized by the optimized block operator: branch
/// `|q2 q1⟩ = |b₂b₁⟩` rotates by `k₁ + b₁k₂ + b₂k₃ (mod p)`. Entries may be
/// zero when a sum wraps around to `p`.
pub fn effective_multipliers(multipliers: &[u32], p: u32) -> Result<[u32; 4], CompileError> {
    qfa::ensure_odd_prime(p)?;
    let &[k1, k2, k3] = multipliers else {
        return Err(CompileError::MultiplierCount {
            scheme: Scheme::OptRz,
            expected: 3,
            got: multipliers.len(),
        });
    };
    for k in [k1, k2, k3] {
        qfa::ensure_multiplier(p, k)?;
    }
    let sum = |ks: &[u32]| (ks.iter().map(|&k| k as u64).sum::<u64>() % p as u64) as u32;
    Ok([sum(&[k1]), sum(&[k1, k2]), sum(&[k1, k3]), sum(&[k1, k2, k3])])
}

/// Builds the pre-transpilation circuit for a request.
///
/// Qubit 0 carries the automaton state; in the optimized schemes qubits 1
/// and 2 select the branch and control the second and third rotation.
/// Measurement maps qubit `i` to classical bit `i`, and a run accepts when
/// every measured bit is 0.
pub fn lower(req: &LoweringRequest) -> Result<Circuit, CompileError> {
    let mut c = Circuit::new(req.scheme.num_qubits())?;
    let n = req.length;
    match req.scheme {
        Scheme::RySingle => {
            let t = req.gate_angle(req.multipliers[0]);
            for _ in 0..n {
                c.push(GateKind::Ry(t), &[0])?;
            }
        }
        Scheme::RzSingle => {
            let t = req.gate_angle(req.multipliers[0]);
            c.push(GateKind::Sx, &[0])?;
            for _ in 0..n {
                c.push(GateKind::Rz(t), &[0])?;
            }
            c.push(GateKind::Sxdg, &[0])?;
        }
        Scheme::OptRy | Scheme::OptRz => {
            let [t1, t2, t3] = [0, 1, 2].map(|i| req.gate_angle(req.multipliers[i]));
            let phase = req.scheme == Scheme::OptRz;
            c.push(GateKind::H, &[1])?;
            c.push(GateKind::H, &[2])?;
            if phase {
                c.push(GateKind::Sx, &[0])?;
            }
            for _ in 0..n {
                if phase {
                    c.push(GateKind::Rz(t1), &[0])?;
                    c.push(GateKind::Crz(t2), &[1, 0])?;
                    c.push(GateKind::Crz(t3), &[2, 0])?;
                } else {
                    c.push(GateKind::Ry(t1), &[0])?;
                    c.push(GateKind::Cry(t2), &[1, 0])?;
                    c.push(GateKind::Cry(t3), &[2, 0])?;
                }
            }
            if phase {
                c.push(GateKind::Sxdg, &[0])?;
            }
            c.push(GateKind::H, &[1])?;
            c.push(GateKind::H, &[2])?;
        }
    }
    if req.include_measure {
        for q in 0..c.num_qubits() {
            c.push(GateKind::Measure(q), &[q])?;
        }
    }
    Ok(c)
}

/// A compiled request: the final circuit and its cost.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub circuit: Circuit,
    pub report: CostReport,
}

/// `lower → transpile → (optimize)` followed by a cost report.
pub fn compile(req: &LoweringRequest, run_optimizer: bool) -> Result<Compiled, CompileError> {
    let mut circuit = transpile(&lower(req)?)?;
    if run_optimizer {
        circuit = optimize(&circuit);
    }
    let report = cost_report(&circuit)?;
    Ok(Compiled { circuit, report })
}
