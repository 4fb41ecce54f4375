// SPDX-License-Identifier: Apache-2.0

//! Python bindings for `modfa_core`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use modfa_core::circuit;
use modfa_core::compiler::{self, LoweringRequest, Scheme};
use modfa_core::linalg::ComplexMatrix;
use modfa_core::qfa::{self, Mcqfa, ParallelSpec, SearchMode, Symbol, Variant};
use modfa_core::sim::{self, SimError};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn sim_err(e: SimError) -> PyErr {
    match e {
        SimError::TooWide { .. } | SimError::Linalg(_) | SimError::ComplexFidelity(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        other => value_err(other),
    }
}

fn parse_variant(name: &str) -> PyResult<Variant> {
    match name {
        "plane" | "ry" => Ok(Variant::PlaneRotation),
        "phase" | "rz" => Ok(Variant::PhaseRotation),
        other => Err(value_err(format!("unknown variant {other:?}; expected plane or phase"))),
    }
}

fn parse_symbol(name: &str) -> PyResult<Symbol> {
    match name {
        "left" | "¢" => Ok(Symbol::LeftEnd),
        "a" => Ok(Symbol::A),
        "right" | "$" => Ok(Symbol::RightEnd),
        other => Err(value_err(format!("unknown symbol {other:?}; expected left, a or right"))),
    }
}

fn parse_scheme(name: &str) -> PyResult<Scheme> {
    name.parse().map_err(value_err)
}

fn rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    let (r, c) = m.dim();
    (0..r).map(|i| m.as_slice()[i * c..(i + 1) * c].to_vec()).collect()
}

/// A Moore–Crutchfield automaton over the unary alphabet.
#[pyclass(name = "Automaton", module = "modfa", frozen)]
struct PyAutomaton(Mcqfa);

#[pymethods]
impl PyAutomaton {
    /// Two-state machine for `MOD_p` with multiplier `k`.
    #[staticmethod]
    #[pyo3(signature = (p, k, variant = "plane"))]
    fn two_state(p: u32, k: u32, variant: &str) -> PyResult<Self> {
        qfa::build_two_state(p, k, parse_variant(variant)?).map(Self).map_err(value_err)
    }

    /// Parallel machine over the multiplier set `ks`.
    #[staticmethod]
    #[pyo3(signature = (p, ks, variant = "plane"))]
    fn parallel(p: u32, ks: Vec<u32>, variant: &str) -> PyResult<Self> {
        let spec = ParallelSpec::new(p, ks, parse_variant(variant)?).map_err(value_err)?;
        qfa::build_parallel(&spec).map(Self).map_err(value_err)
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.0.num_states()
    }

    #[getter]
    fn construction(&self) -> String {
        self.0.label().to_string()
    }

    #[getter]
    fn accept_set(&self) -> Vec<usize> {
        self.0.accept_set().to_vec()
    }

    fn acceptance(&self, n: usize) -> f64 {
        self.0.acceptance_probability(n)
    }

    fn final_state(&self, n: usize) -> Vec<Complex64> {
        self.0.run_word(n).amplitudes().to_vec()
    }

    /// States after the left end-marker, each letter and the right end-marker.
    fn trace(&self, n: usize) -> Vec<Vec<Complex64>> {
        self.0.trace_states(n).iter().map(|s| s.amplitudes().to_vec()).collect()
    }

    /// Unitary for `"left"`, `"a"` or `"right"` as a list of rows.
    fn unitary(&self, symbol: &str) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(rows(self.0.unitary(parse_symbol(symbol)?)))
    }

    fn __repr__(&self) -> String {
        format!("Automaton({}, states={})", self.0.label(), self.0.num_states())
    }
}

/// A gate-level circuit.
#[pyclass(name = "Circuit", module = "modfa", frozen)]
struct PyCircuit(circuit::Circuit);

#[pymethods]
impl PyCircuit {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        circuit::parse(text).map(Self).map_err(value_err)
    }

    fn to_text(&self) -> String {
        circuit::serialize(&self.0)
    }

    #[getter]
    fn num_qubits(&self) -> usize {
        self.0.num_qubits()
    }

    #[getter]
    fn global_phase(&self) -> f64 {
        self.0.global_phase()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Gate counts and depth; fails on non-basis gates.
    fn cost(&self) -> PyResult<BTreeMap<&'static str, usize>> {
        let r = compiler::cost_report(&self.0).map_err(value_err)?;
        Ok(BTreeMap::from([
            ("sx", r.sx),
            ("rz", r.rz),
            ("cx", r.cx),
            ("x", r.x),
            ("depth", r.depth),
            ("qubits", r.qubits),
        ]))
    }

    /// Rewrites to the `{rz, sx, x, cx}` basis.
    fn transpile(&self) -> PyResult<Self> {
        compiler::transpile(&self.0).map(Self).map_err(value_err)
    }

    fn optimize(&self) -> Self {
        Self(compiler::optimize(&self.0))
    }

    /// Ideal outcome distribution over the measured bits.
    fn outcome_probs(&self) -> PyResult<BTreeMap<String, f64>> {
        sim::simulate_state(&self.0).map(|r| r.outcome_probs).map_err(sim_err)
    }

    /// Probability that every measured bit reads 0.
    fn acceptance(&self) -> PyResult<f64> {
        sim::simulate_state(&self.0).map(|r| r.acceptance()).map_err(sim_err)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(qubits={}, gates={})", self.0.num_qubits(), self.0.len())
    }
}

/// Gate and readout noise.
#[pyclass(name = "NoiseModel", module = "modfa", frozen)]
struct PyNoiseModel(sim::NoiseModel);

#[pymethods]
impl PyNoiseModel {
    #[new]
    #[pyo3(signature = (depol_1q = 0.0, depol_2q = 0.0, p01 = 0.0, p10 = 0.0, rz_virtual = true))]
    fn new(depol_1q: f64, depol_2q: f64, p01: f64, p10: f64, rz_virtual: bool) -> PyResult<Self> {
        let model = sim::NoiseModel {
            depol_1q,
            depol_2q,
            readout: sim::Readout { p01, p10 },
            rz_virtual,
            ..sim::NoiseModel::ideal()
        };
        model.validate().map_err(sim_err)?;
        Ok(Self(model))
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        sim::NoiseModel::from_toml_str(text).map(Self).map_err(sim_err)
    }

    #[staticmethod]
    fn from_file(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| PyOSError::new_err(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    #[getter]
    fn depol_1q(&self) -> f64 {
        self.0.depol_1q
    }

    #[getter]
    fn depol_2q(&self) -> f64 {
        self.0.depol_2q
    }

    #[getter]
    fn rz_virtual(&self) -> bool {
        self.0.rz_virtual
    }

    fn __repr__(&self) -> String {
        format!("{:?}", self.0)
    }
}

fn request(p: u32, k: Vec<u32>, scheme: &str, length: usize) -> PyResult<LoweringRequest> {
    LoweringRequest::new(p, k, length, parse_scheme(scheme)?, true).map_err(value_err)
}

/// Compiles `MOD_p` on `a^length` to a basis circuit.
#[pyfunction]
#[pyo3(signature = (p, k, scheme, length, optimize = true))]
fn compile(p: u32, k: Vec<u32>, scheme: &str, length: usize, optimize: bool) -> PyResult<PyCircuit> {
    let req = request(p, k, scheme, length)?;
    compiler::compile(&req, optimize).map(|c| PyCircuit(c.circuit)).map_err(value_err)
}

/// The circuit before transpilation.
#[pyfunction]
#[pyo3(signature = (p, k, scheme, length))]
fn lower(p: u32, k: Vec<u32>, scheme: &str, length: usize) -> PyResult<PyCircuit> {
    compiler::lower(&request(p, k, scheme, length)?).map(PyCircuit).map_err(value_err)
}

#[pyfunction]
fn effective_multipliers(k: Vec<u32>, p: u32) -> PyResult<[u32; 4]> {
    compiler::effective_multipliers(&k, p).map_err(value_err)
}

#[pyfunction]
fn two_state_closed_form(p: u32, k: u32, l: u64) -> PyResult<f64> {
    qfa::two_state_closed_form(p, k, l).map_err(value_err)
}

#[pyfunction]
fn parallel_interference_form(p: u32, ks: Vec<u32>, l: u64) -> PyResult<f64> {
    qfa::parallel_interference_form(p, &ks, l).map_err(value_err)
}

#[pyfunction]
fn averaged_closed_form(p: u32, ks: Vec<u32>, l: u64) -> PyResult<f64> {
    qfa::averaged_closed_form(p, &ks, l).map_err(value_err)
}

/// `(sub_automata, state_bound)` for error bound `epsilon`.
#[pyfunction]
fn states_for_error(p: u32, epsilon: f64) -> PyResult<(usize, usize)> {
    qfa::states_for_error(p, epsilon)
        .map(|b| (b.sub_automata, b.state_bound))
        .map_err(value_err)
}

/// Best multiplier set of size `d`; returns `(ks, worst_case)`.
#[pyfunction]
#[pyo3(signature = (p, d, trials = None, seed = None))]
fn search_k(p: u32, d: usize, trials: Option<usize>, seed: Option<u64>) -> PyResult<(Vec<u32>, f64)> {
    let mode = match (trials, seed) {
        (None, None) => SearchMode::Exhaustive,
        (Some(trials), Some(seed)) => SearchMode::Random { trials, seed },
        _ => return Err(value_err("random search needs both trials and seed")),
    };
    match qfa::search_k(p, d, mode) {
        Ok(r) => Ok((r.multipliers, r.worst_case)),
        Err(e @ qfa::QfaError::SearchBudgetExceeded { .. }) => Err(PyRuntimeError::new_err(e.to_string())),
        Err(e) => Err(value_err(e)),
    }
}

/// Noisy outcome distribution from density-matrix simulation.
#[pyfunction]
fn simulate_density(circuit: &PyCircuit, noise: &PyNoiseModel) -> PyResult<BTreeMap<String, f64>> {
    let rho = sim::simulate_density(&circuit.0, &noise.0).map_err(sim_err)?;
    Ok(rho.outcome_probs(&circuit.0))
}

/// `⟨ψ|ρ|ψ⟩` between the ideal and noisy pre-measurement states.
#[pyfunction]
fn fidelity(circuit: &PyCircuit, noise: &PyNoiseModel) -> PyResult<f64> {
    let ideal = sim::simulate_state(&circuit.0).map_err(sim_err)?;
    let rho = sim::simulate_density(&circuit.0, &noise.0).map_err(sim_err)?;
    sim::fidelity(&ideal.state, &rho).map_err(sim_err)
}

/// Shot counts keyed by bitstring, readout error included.
#[pyfunction]
#[pyo3(signature = (circuit, noise, shots = 8192, seed = 0))]
fn sample(circuit: &PyCircuit, noise: &PyNoiseModel, shots: u64, seed: u64) -> PyResult<BTreeMap<String, u64>> {
    let rho = sim::simulate_density(&circuit.0, &noise.0).map_err(sim_err)?;
    sim::sample_counts(&rho.outcome_probs(&circuit.0), &noise.0, shots, seed)
        .map(|c| c.counts)
        .map_err(sim_err)
}

#[allow(clippy::too_many_arguments)]
fn run_sweep(
    p: u32,
    k: Vec<u32>,
    scheme: &str,
    max_length: usize,
    noise: Option<&PyNoiseModel>,
    shots: u64,
    seed: u64,
    optimize: bool,
) -> PyResult<Vec<sim::SweepRow>> {
    let template = request(p, k, scheme, 0)?;
    let mut opts = sim::SweepOptions::new(max_length);
    if let Some(n) = noise {
        opts = opts.with_noise(n.0.clone(), shots, seed);
    }
    opts.optimize = optimize;
    sim::sweep(&template, &opts).map_err(sim_err)
}

/// Length sweep `0..=max_length`; one dict per row.
#[pyfunction]
#[pyo3(signature = (p, k, scheme, max_length, noise = None, shots = 8192, seed = 0, optimize = true))]
#[allow(clippy::too_many_arguments)]
fn sweep<'py>(
    py: Python<'py>,
    p: u32,
    k: Vec<u32>,
    scheme: &str,
    max_length: usize,
    noise: Option<PyRef<'py, PyNoiseModel>>,
    shots: u64,
    seed: u64,
    optimize: bool,
) -> PyResult<Vec<Bound<'py, pyo3::types::PyDict>>> {
    use pyo3::types::PyDict;
    let rows = run_sweep(p, k, scheme, max_length, noise.as_deref(), shots, seed, optimize)?;
    rows.into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("length", r.length)?;
            d.set_item("scheme", r.scheme.as_str())?;
            d.set_item("p", r.p)?;
            d.set_item("k_set", r.k_set)?;
            d.set_item("ideal_prob", r.ideal_prob)?;
            d.set_item("noisy_prob", r.noisy_prob)?;
            d.set_item("fidelity", r.fidelity)?;
            d.set_item("sx", r.cost.sx)?;
            d.set_item("rz", r.cost.rz)?;
            d.set_item("cx", r.cost.cx)?;
            d.set_item("depth", r.cost.depth)?;
            Ok(d)
        })
        .collect()
}

/// The same sweep rendered as CSV text.
#[pyfunction]
#[pyo3(signature = (p, k, scheme, max_length, noise = None, shots = 8192, seed = 0, optimize = true))]
#[allow(clippy::too_many_arguments)]
fn sweep_csv(
    p: u32,
    k: Vec<u32>,
    scheme: &str,
    max_length: usize,
    noise: Option<PyRef<'_, PyNoiseModel>>,
    shots: u64,
    seed: u64,
    optimize: bool,
) -> PyResult<String> {
    let rows = run_sweep(p, k, scheme, max_length, noise.as_deref(), shots, seed, optimize)?;
    Ok(sim::to_csv(&rows))
}

#[pymodule]
fn modfa(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAutomaton>()?;
    m.add_class::<PyCircuit>()?;
    m.add_class::<PyNoiseModel>()?;
    m.add_function(wrap_pyfunction!(compile, m)?)?;
    m.add_function(wrap_pyfunction!(lower, m)?)?;
    m.add_function(wrap_pyfunction!(effective_multipliers, m)?)?;
    m.add_function(wrap_pyfunction!(two_state_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(parallel_interference_form, m)?)?;
    m.add_function(wrap_pyfunction!(averaged_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(states_for_error, m)?)?;
    m.add_function(wrap_pyfunction!(search_k, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_density, m)?)?;
    m.add_function(wrap_pyfunction!(fidelity, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
