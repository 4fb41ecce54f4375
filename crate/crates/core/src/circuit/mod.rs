// SPDX-License-Identifier: Apache-2.0

//! Gate-list circuit representation, structural metrics and unitary
//! extraction.
//!
//! Qubit `i` is bit `i` of a basis-state index (little-endian), so a
//! bitstring printed most-significant first reads `q_{n-1} … q_0`.

mod kernel;
mod text;

pub(crate) use kernel::{apply_local, apply_local_right_adjoint, LocalOp};
pub use text::{parse, serialize, ParseError};

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::linalg::{cis, gates, ComplexMatrix, LinalgError};

/// Widest circuit whose unitary or statevector may be formed.
pub const MAX_UNITARY_QUBITS: usize = 12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error("{kind} expects {expected} qubit(s), got {got}")]
    Arity {
        kind: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("qubit {qubit} out of range for a {width}-qubit circuit")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("gate uses qubit {0} more than once")]
    RepeatedQubit(usize),
    #[error("gate {kind} on qubit {qubit} follows its measurement")]
    GateAfterMeasure { kind: &'static str, qubit: usize },
    #[error("classical bit {0} is written twice")]
    RepeatedClassicalBit(usize),
    #[error("angle {0} is not finite")]
    NonFiniteAngle(f64),
    #[error("circuit width {width} exceeds the limit of {limit} qubits")]
    TooWide { width: usize, limit: usize },
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    Sx,
    Sxdg,
    H,
    Ry(f64),
    Rz(f64),
    Cx,
    Cry(f64),
    Crz(f64),
    /// Measurement into the given classical bit.
    Measure(usize),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Sx => "sx",
            GateKind::Sxdg => "sxdg",
            GateKind::H => "h",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Cx => "cx",
            GateKind::Cry(_) => "cry",
            GateKind::Crz(_) => "crz",
            GateKind::Measure(_) => "measure",
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::Cx | GateKind::Cry(_) | GateKind::Crz(_) => 2,
            _ => 1,
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(t) | GateKind::Rz(t) | GateKind::Cry(t) | GateKind::Crz(t) => Some(t),
            _ => None,
        }
    }

    /// Member of the hardware basis `{CX, RZ, SX, X}` (measurement passes
    /// through every stage as well).
    pub fn is_basis(&self) -> bool {
        matches!(
            self,
            GateKind::X | GateKind::Sx | GateKind::Rz(_) | GateKind::Cx | GateKind::Measure(_)
        )
    }

    /// The 2x2 operator acting on the target qubit; controlled kinds apply it
    /// only when the control is set. `None` for measurement.
    pub fn target_matrix(&self) -> Option<ComplexMatrix> {
        Some(match *self {
            GateKind::X | GateKind::Cx => gates::x(),
            GateKind::Sx => gates::sx(),
            GateKind::Sxdg => gates::sxdg(),
            GateKind::H => gates::h(),
            GateKind::Ry(t) | GateKind::Cry(t) => gates::ry(t),
            GateKind::Rz(t) | GateKind::Crz(t) => gates::rz(t),
            GateKind::Measure(_) => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    kind: GateKind,
    qubits: Vec<usize>,
}

impl Gate {
    /// `qubits` lists the control first for two-qubit kinds.
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Self, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                kind: kind.name(),
                expected: kind.arity(),
                got: qubits.len(),
            });
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(CircuitError::RepeatedQubit(qubits[0]));
        }
        if let Some(t) = kind.angle() {
            if !t.is_finite() {
                return Err(CircuitError::NonFiniteAngle(t));
            }
        }
        Ok(Self {
            kind,
            qubits: qubits.to_vec(),
        })
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    /// Target qubit (the last listed qubit).
    pub fn target(&self) -> usize {
        *self.qubits.last().expect("gates have at least one qubit")
    }

    pub fn control(&self) -> Option<usize> {
        (self.qubits.len() == 2).then(|| self.qubits[0])
    }

    pub fn is_measure(&self) -> bool {
        matches!(self.kind, GateKind::Measure(_))
    }

    pub(crate) fn local_op(&self) -> Option<LocalOp> {
        let m = self.kind.target_matrix()?;
        Some(LocalOp::new(self.control(), self.target(), &m))
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for q in &self.qubits {
            write!(f, " {q}")?;
        }
        match self.kind {
            GateKind::Measure(cbit) => write!(f, " {cbit}"),
            kind => match kind.angle() {
                Some(t) => write!(f, " {t}"),
                None => Ok(()),
            },
        }
    }
}

/// Ordered gate list with a tracked global phase: the represented operator
/// is `e^{i·global_phase} · G_last ⋯ G_first`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
    global_phase: f64,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self, CircuitError> {
        if num_qubits == 0 {
            return Err(CircuitError::NoQubits);
        }
        Ok(Self {
            num_qubits,
            gates: Vec::new(),
            global_phase: 0.0,
        })
    }

    /// Builds a circuit from parts, checking every invariant.
    pub fn from_gates(
        num_qubits: usize,
        gates: impl IntoIterator<Item = Gate>,
        global_phase: f64,
    ) -> Result<Self, CircuitError> {
        let mut c = Self::new(num_qubits)?;
        for g in gates {
            c.push_gate(g)?;
        }
        c.set_global_phase(global_phase)?;
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn global_phase(&self) -> f64 {
        self.global_phase
    }

    pub fn set_global_phase(&mut self, phase: f64) -> Result<(), CircuitError> {
        if !phase.is_finite() {
            return Err(CircuitError::NonFiniteAngle(phase));
        }
        self.global_phase = phase;
        Ok(())
    }

    pub fn add_global_phase(&mut self, delta: f64) {
        self.global_phase += delta;
    }

    pub fn push(&mut self, kind: GateKind, qubits: &[usize]) -> Result<&mut Self, CircuitError> {
        self.push_gate(Gate::new(kind, qubits)?)
    }

    pub fn push_gate(&mut self, gate: Gate) -> Result<&mut Self, CircuitError> {
        for &q in &gate.qubits {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    width: self.num_qubits,
                });
            }
            if self.measured(q) {
                return Err(CircuitError::GateAfterMeasure {
                    kind: gate.kind.name(),
                    qubit: q,
                });
            }
        }
        if let GateKind::Measure(cbit) = gate.kind {
            if self.measurements().iter().any(|&(_, b)| b == cbit) {
                return Err(CircuitError::RepeatedClassicalBit(cbit));
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    fn measured(&self, qubit: usize) -> bool {
        self.gates
            .iter()
            .any(|g| g.is_measure() && g.qubits[0] == qubit)
    }

    /// `(qubit, classical bit)` pairs in program order.
    pub fn measurements(&self) -> Vec<(usize, usize)> {
        self.gates
            .iter()
            .filter_map(|g| match g.kind {
                GateKind::Measure(cbit) => Some((g.qubits[0], cbit)),
                _ => None,
            })
            .collect()
    }

    pub fn without_measurements(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            gates: self.gates.iter().filter(|g| !g.is_measure()).cloned().collect(),
            global_phase: self.global_phase,
        }
    }

    /// Appends every gate of `other` (same width) and adds its phase.
    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for g in &other.gates {
            self.push_gate(g.clone())?;
        }
        self.global_phase += other.global_phase;
        Ok(())
    }

    /// Circuit with the same gates and phase but no invariant checks; used by
    /// rewrite passes that only delete or replace gates in place.
    pub(crate) fn from_parts_unchecked(num_qubits: usize, gates: Vec<Gate>, global_phase: f64) -> Self {
        Self {
            num_qubits,
            gates,
            global_phase,
        }
    }
}

/// Operator of a circuit together with the number of measurements that were
/// skipped while forming it.
#[derive(Debug, Clone)]
pub struct CircuitUnitary {
    pub matrix: ComplexMatrix,
    pub ignored_measurements: usize,
}

/// Full `2^n × 2^n` operator, including the global phase. Measurements are
/// skipped and counted.
pub fn unitary_of(c: &Circuit) -> Result<CircuitUnitary, CircuitError> {
    if c.num_qubits > MAX_UNITARY_QUBITS {
        return Err(CircuitError::TooWide {
            width: c.num_qubits,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << c.num_qubits;
    let mut m = ComplexMatrix::identity(dim);
    let mut ignored_measurements = 0;
    for g in &c.gates {
        match g.local_op() {
            Some(op) => apply_local(m.as_mut_slice(), dim, &op),
            None => ignored_measurements += 1,
        }
    }
    if c.global_phase != 0.0 {
        m = m.scale(cis(c.global_phase));
    }
    Ok(CircuitUnitary {
        matrix: m,
        ignored_measurements,
    })
}

/// Longest chain of gates where consecutive gates share a qubit.
/// Measurements count as gates.
pub fn depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.num_qubits];
    for g in &c.gates {
        let next = g.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in &g.qubits {
            level[q] = next;
        }
    }
    level.into_iter().max().unwrap_or(0)
}

/// Histogram of gate names, ignoring angles.
pub fn gate_counts(c: &Circuit) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for g in &c.gates {
        *counts.entry(g.kind.name().to_string()).or_insert(0) += 1;
    }
    counts
}

/// True iff `‖A − e^{iφ}B‖_max < tol` for the phase `φ` read off the
/// largest-magnitude entry of `B`.
pub fn equiv_global_phase(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> Result<bool, CircuitError> {
    if a.dim() != b.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        }
        .into());
    }
    Ok(relative_phase(a, b).is_some_and(|phase| {
        a.max_abs_diff(&b.scale(phase)).expect("same dimensions") < tol
    }))
}

/// Unit-modulus `e^{iφ}` with `A ≈ e^{iφ}B`, taken from the largest entry of
/// `B`; `None` when the corresponding entry of `A` vanishes.
pub fn relative_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> Option<Complex64> {
    let (idx, pivot) = b
        .as_slice()
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))?;
    let ratio = a.as_slice()[idx] / pivot;
    (ratio.norm() > f64::EPSILON && pivot.norm() > f64::EPSILON).then(|| ratio / ratio.norm())
}
