//! Python bindings: Hamiltonians, circuits, exact ground energies, MUB
//! initial states, single VQE runs and full campaigns.

use mubvqe::ansatz::{build_efficient_su2, build_uccsd_2q, parse_ansatz_file};
use mubvqe::dqes::{self, CampaignConfig, Strategy, TrialCount};
use mubvqe::exact::{ground_energy as solve_ground, LanczosConfig, SolverChoice};
use mubvqe::mub::{partial_dqes_count, partial_dqes_states};
use mubvqe::optim::{OptimizerConfig, OptimizerMethod};
use mubvqe::problems::load_hamiltonian;
use mubvqe::vqe::{energy_exact, run_vqe as run_trial, EstimatorConfig, TrialSetup};
use mubvqe::{basis_state, expectation_exact, parse_hamiltonian, run_circuit, Complex64, StateVector};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: mubvqe::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn solver_choice(name: &str) -> PyResult<SolverChoice> {
    match name {
        "auto" => Ok(SolverChoice::Auto),
        "dense" => Ok(SolverChoice::Dense),
        "lanczos" => Ok(SolverChoice::Lanczos),
        other => Err(PyValueError::new_err(format!("unknown solver '{other}' (auto, dense, lanczos)"))),
    }
}

fn optimizer(name: &str, max_iter: Option<usize>, step_size: Option<f64>) -> PyResult<OptimizerConfig> {
    let method = match name {
        "adam" => OptimizerMethod::GradientDescentAdam,
        "nelder-mead" => OptimizerMethod::NelderMead,
        other => return Err(PyValueError::new_err(format!("unknown optimizer '{other}' (adam, nelder-mead)"))),
    };
    let defaults = OptimizerConfig::default();
    Ok(OptimizerConfig {
        method,
        max_iterations: max_iter.unwrap_or(defaults.max_iterations),
        step_size: step_size.unwrap_or(defaults.step_size),
        ..defaults
    })
}

fn estimator(shots: Option<u64>, seed: u64) -> EstimatorConfig {
    match shots {
        Some(s) => EstimatorConfig::shots(s, seed),
        None => EstimatorConfig::exact(),
    }
}

/// A qubit Hamiltonian, a real combination of Pauli words.
#[pyclass(name = "Hamiltonian", frozen)]
struct PyHamiltonian {
    inner: mubvqe::QubitHamiltonian,
}

#[pymethods]
impl PyHamiltonian {
    /// Parses lines of `coefficient word`, e.g. `-0.5 XZ`.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_hamiltonian(text).map(|inner| PyHamiltonian { inner }).map_err(py_err)
    }

    /// Loads a built-in name (`hcooh-2q`, `h2o-2q`), a synthetic spec or a file path.
    #[staticmethod]
    fn load(spec: &str) -> PyResult<Self> {
        load_hamiltonian(spec).map(|inner| PyHamiltonian { inner }).map_err(py_err)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    #[getter]
    fn n_terms(&self) -> usize {
        self.inner.terms().len()
    }

    /// `(coefficient, word)` pairs with the leftmost character on the highest qubit.
    fn terms(&self) -> Vec<(f64, String)> {
        self.inner.terms().iter().map(|(c, w)| (*c, w.to_string())).collect()
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn scaled(&self, factor: f64) -> PyResult<Self> {
        self.inner.scaled(factor).map(|inner| PyHamiltonian { inner }).map_err(py_err)
    }

    /// `<psi|H|psi>` for a normalized amplitude list.
    fn expectation(&self, amplitudes: Vec<Complex64>) -> PyResult<f64> {
        let state = StateVector::from_amplitudes(self.inner.n_qubits(), amplitudes).map_err(py_err)?;
        expectation_exact(&self.inner, &state).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Hamiltonian(n_qubits={}, n_terms={})", self.inner.n_qubits(), self.inner.terms().len())
    }
}

/// A parameterized circuit of Pauli rotations and CX gates.
#[pyclass(name = "Circuit", frozen)]
struct PyCircuit {
    inner: mubvqe::Circuit,
}

#[pymethods]
impl PyCircuit {
    /// The two-qubit UCCSD circuit with three parameters.
    #[staticmethod]
    fn uccsd2() -> Self {
        PyCircuit { inner: build_uccsd_2q() }
    }

    /// RY/RZ layers with linear CX entanglement.
    #[staticmethod]
    #[pyo3(signature = (n_qubits, reps = 3))]
    fn efficient_su2(n_qubits: usize, reps: usize) -> PyResult<Self> {
        build_efficient_su2(n_qubits, reps).map(|inner| PyCircuit { inner }).map_err(py_err)
    }

    /// Parses the text ansatz format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        parse_ansatz_file(text).map(|inner| PyCircuit { inner }).map_err(py_err)
    }

    #[getter]
    fn n_qubits(&self) -> usize {
        self.inner.n_qubits()
    }

    #[getter]
    fn n_params(&self) -> usize {
        self.inner.n_params()
    }

    #[getter]
    fn n_cx(&self) -> usize {
        self.inner.count_cx()
    }

    /// Amplitudes of `U(theta)|basis>`.
    #[pyo3(signature = (theta, basis = 0))]
    fn run(&self, theta: Vec<f64>, basis: usize) -> PyResult<Vec<Complex64>> {
        let initial = basis_state(self.inner.n_qubits(), basis).map_err(py_err)?;
        run_circuit(&self.inner, &theta, &initial)
            .map(StateVector::into_amplitudes)
            .map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Circuit(n_qubits={}, n_params={})", self.inner.n_qubits(), self.inner.n_params())
    }
}

/// Lowest eigenvalue of `h`.
#[pyfunction]
#[pyo3(signature = (h, solver = "auto", seed = 0))]
fn ground_energy(h: &PyHamiltonian, solver: &str, seed: u64) -> PyResult<f64> {
    let cfg = LanczosConfig {
        seed,
        ..LanczosConfig::default()
    };
    solve_ground(&h.inner, solver_choice(solver)?, &cfg)
        .map(|s| s.e0)
        .map_err(py_err)
}

/// Size of the partial MUB initial-state set on `n_qubits` qubits.
#[pyfunction]
fn mub_state_count(n_qubits: usize) -> usize {
    partial_dqes_count(n_qubits)
}

/// `(label, amplitudes)` for each partial MUB initial state.
#[pyfunction]
fn mub_states(n_qubits: usize) -> PyResult<Vec<(String, Vec<Complex64>)>> {
    let set = partial_dqes_states(n_qubits).map_err(py_err)?;
    Ok(set
        .entries
        .into_iter()
        .map(|e| (e.label, e.state.into_amplitudes()))
        .collect())
}

/// Exact energy `<b|U(theta)^† H U(theta)|b>`.
#[pyfunction]
#[pyo3(signature = (h, circuit, theta, basis = 0))]
fn energy(h: &PyHamiltonian, circuit: &PyCircuit, theta: Vec<f64>, basis: usize) -> PyResult<f64> {
    let initial = basis_state(h.inner.n_qubits(), basis).map_err(py_err)?;
    energy_exact(&h.inner, &circuit.inner, &theta, &initial).map_err(py_err)
}

/// One VQE trial from `|basis>`; returns the trial result as JSON.
#[pyfunction]
#[pyo3(signature = (h, circuit, basis = 0, theta0 = None, optimizer_name = "adam", max_iter = None,
                    step_size = None, shots = None, seed = 0, e0 = None))]
#[allow(clippy::too_many_arguments)]
fn run_vqe(
    h: &PyHamiltonian,
    circuit: &PyCircuit,
    basis: usize,
    theta0: Option<Vec<f64>>,
    optimizer_name: &str,
    max_iter: Option<usize>,
    step_size: Option<f64>,
    shots: Option<u64>,
    seed: u64,
    e0: Option<f64>,
) -> PyResult<String> {
    let initial = basis_state(h.inner.n_qubits(), basis).map_err(py_err)?;
    let setup = TrialSetup {
        label: format!("basis{basis}"),
        initial: &initial,
        theta0: theta0.unwrap_or_else(|| vec![0.0; circuit.inner.n_params()]),
        seed,
        e0,
    };
    let opt = optimizer(optimizer_name, max_iter, step_size)?;
    let result = run_trial(&h.inner, &circuit.inner, setup, &estimator(shots, seed), &opt).map_err(py_err)?;
    serde_json::to_string(&result).map_err(json_err)
}

/// A full campaign of trials over one initialization strategy; returns the report as JSON.
#[pyfunction]
#[pyo3(signature = (h, circuit, strategy = "mub-pairs", trials = None, seed = 0, optimizer_name = "adam",
                    max_iter = None, shots = None, e0 = None, workers = 0))]
#[allow(clippy::too_many_arguments)]
fn run_campaign(
    py: Python<'_>,
    h: &PyHamiltonian,
    circuit: &PyCircuit,
    strategy: &str,
    trials: Option<usize>,
    seed: u64,
    optimizer_name: &str,
    max_iter: Option<usize>,
    shots: Option<u64>,
    e0: Option<f64>,
    workers: usize,
) -> PyResult<String> {
    let cfg = CampaignConfig {
        strategy: strategy.parse::<Strategy>().map_err(py_err)?,
        trials: trials.map_or(TrialCount::MatchMub, TrialCount::Fixed),
        seed,
        estimator: estimator(shots, seed),
        optimizer: optimizer(optimizer_name, max_iter, None)?,
        e0,
        workers,
        ..CampaignConfig::default()
    };
    let report = py
        .detach(|| dqes::run_campaign(&h.inner, &circuit.inner, &cfg))
        .map_err(py_err)?;
    serde_json::to_string(&report).map_err(json_err)
}

#[pymodule]
#[pyo3(name = "mubvqe")]
fn mubvqe_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHamiltonian>()?;
    m.add_class::<PyCircuit>()?;
    m.add_function(wrap_pyfunction!(ground_energy, m)?)?;
    m.add_function(wrap_pyfunction!(mub_state_count, m)?)?;
    m.add_function(wrap_pyfunction!(mub_states, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(run_vqe, m)?)?;
    m.add_function(wrap_pyfunction!(run_campaign, m)?)?;
    Ok(())
}
