// SPDX-License-Identifier: Apache-2.0

//! Moore–Crutchfield quantum finite automata for the unary language
//! `MOD_p = { a^j : j ≡ 0 (mod p) }`.
//!
//! An automaton holds one unitary per symbol of `{¢, a, $}`. Reading `a^n`
//! prepares the start basis state, applies `U_¢`, then `U_a` once per
//! symbol, then `U_$`; the acceptance probability is the squared weight on
//! the accept set. Two families are provided: the plane-rotation machines
//! (real rotations, lowered to `ry`) and the phase-rotation machines that
//! conjugate diagonal phases by `SX` (lowered to `rz`). Both accept exactly
//! the same probabilities.

mod forms;
mod search;

pub use forms::{
    averaged_closed_form, parallel_interference_form, states_for_error, two_state_closed_form,
    ErrorBound,
};
pub(crate) use forms::interference;
pub use search::{search_k, SearchMode, SearchResult, EXHAUSTIVE_BUDGET};

use std::f64::consts::PI;
use std::fmt;

use crate::linalg::{gates, ComplexMatrix, LinalgError, StateVector, UNITARY_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QfaError {
    #[error("p = {0} must be an odd prime")]
    NotOddPrime(u32),
    #[error("multiplier k = {k} must lie in 1..={max}")]
    MultiplierOutOfRange { k: u32, max: u32 },
    #[error("multiplier set must not be empty")]
    EmptyMultipliers,
    #[error("number of sub-automata d = {0} must be a power of two")]
    NotPowerOfTwo(usize),
    #[error("d = {d} exceeds the {available} available multipliers for p = {p}")]
    TooManyMultipliers { d: usize, p: u32, available: u32 },
    #[error("error bound ε = {0} must lie in the open interval (0, 1/2)")]
    ErrorBoundOutOfRange(f64),
    #[error(
        "exhaustive search would visit {candidates} candidate sets (budget {budget}); use random mode"
    )]
    SearchBudgetExceeded { candidates: u128, budget: u128 },
    #[error("random search needs at least one trial")]
    NoTrials,
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Checks that `p` is an odd prime by trial division.
pub fn ensure_odd_prime(p: u32) -> Result<(), QfaError> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(QfaError::NotOddPrime(p));
    }
    let mut f = 3u32;
    while (f as u64) * (f as u64) <= p as u64 {
        if p.is_multiple_of(f) {
            return Err(QfaError::NotOddPrime(p));
        }
        f += 2;
    }
    Ok(())
}

pub(crate) fn ensure_multiplier(p: u32, k: u32) -> Result<(), QfaError> {
    if k == 0 || k >= p {
        return Err(QfaError::MultiplierOutOfRange { k, max: p - 1 });
    }
    Ok(())
}

pub(crate) fn ensure_power_of_two(d: usize) -> Result<(), QfaError> {
    if d == 0 || !d.is_power_of_two() {
        return Err(QfaError::NotPowerOfTwo(d));
    }
    Ok(())
}

/// Rotation angle `2πk/p`, with the product reduced mod `p` first so long
/// words do not lose precision.
pub(crate) fn rotation_angle(p: u32, k: u64) -> f64 {
    2.0 * PI * ((k % p as u64) as f64) / p as f64
}

/// How the per-symbol rotation is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Real rotation in the plane of two basis states.
    PlaneRotation,
    /// Diagonal phase rotation, conjugated by `SX` at the end-markers.
    PhaseRotation,
}

impl Variant {
    pub const ALL: [Variant; 2] = [Variant::PlaneRotation, Variant::PhaseRotation];
}

/// Construction tag carried by every automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Construction {
    Ry2,
    Rz2,
    ParallelRy,
    ParallelRz,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::Ry2 => "ry2",
            Construction::Rz2 => "rz2",
            Construction::ParallelRy => "parallel-ry",
            Construction::ParallelRz => "parallel-rz",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbol {
    LeftEnd,
    A,
    RightEnd,
}

#[derive(Debug, Clone)]
pub struct Mcqfa {
    label: Construction,
    left_end: ComplexMatrix,
    letter: ComplexMatrix,
    right_end: ComplexMatrix,
    start: usize,
    accept: Vec<usize>,
}

impl Mcqfa {
    /// Assembles an automaton, checking unitarity and index ranges.
    pub fn new(
        label: Construction,
        left_end: ComplexMatrix,
        letter: ComplexMatrix,
        right_end: ComplexMatrix,
        start: usize,
        accept: Vec<usize>,
    ) -> Result<Self, QfaError> {
        let d = letter.rows();
        for (name, m) in [("¢", &left_end), ("a", &letter), ("$", &right_end)] {
            if m.dim() != (d, d) {
                return Err(QfaError::InvalidAutomaton(format!(
                    "U_{name} is {:?}, expected {d}x{d}",
                    m.dim()
                )));
            }
            m.ensure_unitary()?;
        }
        if start >= d {
            return Err(QfaError::InvalidAutomaton(format!(
                "start state {start} outside 0..{d}"
            )));
        }
        if accept.is_empty() {
            return Err(QfaError::InvalidAutomaton("accept set is empty".into()));
        }
        if let Some(&q) = accept.iter().find(|&&q| q >= d) {
            return Err(QfaError::InvalidAutomaton(format!(
                "accept state {q} outside 0..{d}"
            )));
        }
        if label == Construction::Rz2 {
            let sx = gates::sx();
            if left_end.max_abs_diff(&sx)? >= UNITARY_TOL
                || right_end.max_abs_diff(&left_end.adjoint())? >= UNITARY_TOL
            {
                return Err(QfaError::InvalidAutomaton(
                    "rz2 requires U_¢ = SX and U_$ = SX†".into(),
                ));
            }
        }
        let mut accept = accept;
        accept.sort_unstable();
        accept.dedup();
        Ok(Self {
            label,
            left_end,
            letter,
            right_end,
            start,
            accept,
        })
    }

    pub fn num_states(&self) -> usize {
        self.letter.rows()
    }

    pub fn label(&self) -> Construction {
        self.label
    }

    pub fn start_index(&self) -> usize {
        self.start
    }

    pub fn accept_set(&self) -> &[usize] {
        &self.accept
    }

    pub fn unitary(&self, symbol: Symbol) -> &ComplexMatrix {
        match symbol {
            Symbol::LeftEnd => &self.left_end,
            Symbol::A => &self.letter,
            Symbol::RightEnd => &self.right_end,
        }
    }

    /// Final state after reading `¢ a^n $`, one matrix–vector product per
    /// symbol.
    pub fn run_word(&self, n: usize) -> StateVector {
        let mut v = self.start_state().apply(&self.left_end).expect("square");
        for _ in 0..n {
            v = v.apply(&self.letter).expect("square");
        }
        StateVector::from_evolved(
            v.apply(&self.right_end).expect("square").amplitudes().to_vec(),
        )
    }

    pub fn acceptance_probability(&self, n: usize) -> f64 {
        self.accept_weight(&self.run_word(n))
    }

    /// States after `U_¢`, after each of the `n` letters, and after `U_$`.
    pub fn trace_states(&self, n: usize) -> Vec<StateVector> {
        let mut out = Vec::with_capacity(n + 2);
        let mut v = self.start_state().apply(&self.left_end).expect("square");
        out.push(v.clone());
        for _ in 0..n {
            v = v.apply(&self.letter).expect("square");
            out.push(v.clone());
        }
        out.push(v.apply(&self.right_end).expect("square"));
        out
    }

    fn start_state(&self) -> StateVector {
        StateVector::basis(self.num_states(), self.start)
    }

    fn accept_weight(&self, v: &StateVector) -> f64 {
        self.accept
            .iter()
            .map(|&q| v.probability(q))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }
}

/// Two-state machine rotating by `2πk/p` per letter; start and accept are
/// both state 0.
pub fn build_two_state(p: u32, k: u32, variant: Variant) -> Result<Mcqfa, QfaError> {
    ensure_odd_prime(p)?;
    ensure_multiplier(p, k)?;
    let theta = rotation_angle(p, k as u64);
    match variant {
        Variant::PlaneRotation => Mcqfa::new(
            Construction::Ry2,
            ComplexMatrix::identity(2),
            gates::plane_rotation(theta),
            ComplexMatrix::identity(2),
            0,
            vec![0],
        ),
        Variant::PhaseRotation => Mcqfa::new(
            Construction::Rz2,
            gates::sx(),
            gates::phase_rotation(theta),
            gates::sxdg(),
            0,
            vec![0],
        ),
    }
}

/// Parameters of a parallel machine: one two-state sub-automaton per
/// multiplier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelSpec {
    p: u32,
    multipliers: Vec<u32>,
    variant: Variant,
}

impl ParallelSpec {
    pub fn new(p: u32, multipliers: Vec<u32>, variant: Variant) -> Result<Self, QfaError> {
        ensure_odd_prime(p)?;
        if multipliers.is_empty() {
            return Err(QfaError::EmptyMultipliers);
        }
        for &k in &multipliers {
            ensure_multiplier(p, k)?;
        }
        ensure_power_of_two(multipliers.len())?;
        Ok(Self {
            p,
            multipliers,
            variant,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn multipliers(&self) -> &[u32] {
        &self.multipliers
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }
}

/// `2d`-state machine running the `d` sub-automata in superposition.
///
/// State `2j + b` is state `q_{b+1}` of sub-automaton `j`. `U_¢` is
/// `H^{⊗log d} ⊗ I` (plane) or `H^{⊗log d} ⊗ SX` (phase), `U_a` the block
/// diagonal of the per-multiplier rotations, and `U_$ = U_¢†`.
pub fn build_parallel(spec: &ParallelSpec) -> Result<Mcqfa, QfaError> {
    let d = spec.multipliers.len();
    let hadamards = gates::h().kron_power(d.trailing_zeros());
    let (label, local, rotation): (_, _, fn(f64) -> ComplexMatrix) = match spec.variant {
        Variant::PlaneRotation => (
            Construction::ParallelRy,
            ComplexMatrix::identity(2),
            gates::plane_rotation,
        ),
        Variant::PhaseRotation => (Construction::ParallelRz, gates::sx(), gates::phase_rotation),
    };
    let left_end = hadamards.kron(&local);
    let blocks: Vec<_> = spec
        .multipliers
        .iter()
        .map(|&k| rotation(rotation_angle(spec.p, k as u64)))
        .collect();
    let right_end = left_end.adjoint();
    Mcqfa::new(
        label,
        left_end,
        ComplexMatrix::direct_sum(&blocks),
        right_end,
        0,
        vec![0],
    )
}
