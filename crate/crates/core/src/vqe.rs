//! Cost estimation, parameter-shift gradients and the single-trial VQE loop.

use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::{adam, nelder_mead, OptimizerConfig, OptimizerMethod, Outcome};
use crate::pauli::{Axis, QubitHamiltonian};
use crate::rng::derive_seed;
use crate::statevector::{apply_gate_slice, sample, Circuit, Gate, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorMode {
    #[default]
    Exact,
    Shots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorConfig {
    pub mode: EstimatorMode,
    /// Shots per Pauli term (shots mode only).
    pub shots: u64,
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig {
            mode: EstimatorMode::Exact,
            shots: 1024,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn shots(shots: u64, seed: u64) -> Self {
        EstimatorConfig {
            mode: EstimatorMode::Shots,
            shots,
            seed,
        }
    }
}

fn check_dims(h: &QubitHamiltonian, circuit: &Circuit, initial: &StateVector) -> Result<()> {
    for found in [circuit.n_qubits(), initial.n_qubits()] {
        if found != h.n_qubits() {
            return Err(Error::DimensionMismatch {
                expected: h.n_qubits(),
                found,
            });
        }
    }
    Ok(())
}

/// `C(θ) = <ψ(θ)|H|ψ(θ)>` with `|ψ(θ)> = U(θ)|s0>`, evaluated exactly.
pub fn energy_exact(h: &QubitHamiltonian, circuit: &Circuit, theta: &[f64], initial: &StateVector) -> Result<f64> {
    check_dims(h, circuit, initial)?;
    let mut state = initial.clone();
    circuit.apply_in_place(theta, &mut state, None)?;
    Ok(h.quadratic_form(state.amplitudes()).re)
}

/// Energy and parameter-shift gradient in one sweep. The state before each
/// parameterized gate is kept, so each shifted run only replays the suffix.
/// `note` sees every evaluated energy.
fn energy_and_shift_gradient(
    h: &QubitHamiltonian,
    circuit: &Circuit,
    theta: &[f64],
    initial: &StateVector,
    mut note: impl FnMut(f64),
) -> Result<(f64, Vec<f64>)> {
    circuit.check_theta(theta)?;
    let gates = circuit.gates();
    let angle = |g: &Gate| g.slot().map_or(0.0, |s| theta[s]);
    let mut grad = vec![0.0; circuit.n_params()];
    let mut prefix = initial.amplitudes().to_vec();
    let mut scratch = vec![Complex64::new(0.0, 0.0); prefix.len()];
    for (idx, gate) in gates.iter().enumerate() {
        if let Some(slot) = gate.slot() {
            let mut pair = [0.0; 2];
            for (k, delta) in [FRAC_PI_2, -FRAC_PI_2].into_iter().enumerate() {
                scratch.copy_from_slice(&prefix);
                apply_gate_slice(&mut scratch, gate, angle(gate) + delta);
                for g in &gates[idx + 1..] {
                    apply_gate_slice(&mut scratch, g, angle(g));
                }
                pair[k] = h.quadratic_form(&scratch).re;
                note(pair[k]);
            }
            grad[slot] += (pair[0] - pair[1]) / 2.0;
        }
        apply_gate_slice(&mut prefix, gate, angle(gate));
    }
    let e = h.quadratic_form(&prefix).re;
    note(e);
    Ok((e, grad))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TermEstimate {
    pub coefficient: f64,
    pub word: String,
    /// Sample mean of the ±1 parity.
    pub mean: f64,
    /// Variance of `coefficient · mean` as an estimator.
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShotEstimate {
    pub value: f64,
    /// Square root of the summed per-term estimator variances.
    pub std_error: f64,
    pub terms: Vec<TermEstimate>,
}

/// Shot-based estimate of `C(θ)`. Each term rotates the prepared state into
/// its eigenbasis (X: H, Y: S† then H), samples `cfg.shots` outcomes with the
/// term's own seed sub-stream, and averages the parity over the term's support.
pub fn expectation_shots_detailed(
    h: &QubitHamiltonian,
    circuit: &Circuit,
    theta: &[f64],
    initial: &StateVector,
    cfg: &EstimatorConfig,
) -> Result<ShotEstimate> {
    if cfg.mode != EstimatorMode::Shots || cfg.shots == 0 {
        return Err(Error::InvalidArgument(
            "shot estimator requires shots mode with at least one shot".into(),
        ));
    }
    check_dims(h, circuit, initial)?;
    let mut prepared = initial.clone();
    circuit.apply_in_place(theta, &mut prepared, None)?;

    let mut value = 0.0;
    let mut variance = 0.0;
    let mut terms = Vec::with_capacity(h.terms().len());
    for (idx, (coeff, word)) in h.terms().iter().enumerate() {
        let (mean, var) = if word.is_identity() {
            (1.0, 0.0)
        } else {
            let mut rotated = prepared.clone();
            for q in 0..word.n_qubits() {
                match word.axis(q) {
                    Axis::X => rotated.apply_gate(&Gate::H { qubit: q }, 0.0),
                    Axis::Y => {
                        rotated.apply_gate(&Gate::Sdg { qubit: q }, 0.0);
                        rotated.apply_gate(&Gate::H { qubit: q }, 0.0);
                    }
                    Axis::Z | Axis::I => {}
                }
            }
            let counts = sample(&rotated, cfg.shots, derive_seed(cfg.seed, idx as u64))?;
            let support = word.support() as usize;
            let signed: i64 = counts
                .iter()
                .map(|(&outcome, &n)| {
                    let parity = ((outcome & support).count_ones() % 2) as i64;
                    (1 - 2 * parity) * n as i64
                })
                .sum();
            let shots = cfg.shots as f64;
            let mean = signed as f64 / shots;
            // ±1 outcomes: sample variance is 1 - mean^2
            (mean, coeff * coeff * (1.0 - mean * mean).max(0.0) / shots)
        };
        value += coeff * mean;
        variance += var;
        terms.push(TermEstimate {
            coefficient: *coeff,
            word: word.to_string(),
            mean,
            variance: var,
        });
    }
    Ok(ShotEstimate {
        value,
        std_error: variance.sqrt(),
        terms,
    })
}

pub fn expectation_shots(
    h: &QubitHamiltonian,
    circuit: &Circuit,
    theta: &[f64],
    initial: &StateVector,
    cfg: &EstimatorConfig,
) -> Result<f64> {
    expectation_shots_detailed(h, circuit, theta, initial, cfg).map(|e| e.value)
}

/// Exact gradient by the parameter-shift rule. Every parameterized gate
/// occurrence is shifted by ±π/2 separately and its half-difference is added
/// to its slot, which handles shared slots.
pub fn gradient_parameter_shift(h: &QubitHamiltonian, circuit: &Circuit, theta: &[f64], initial: &StateVector) -> Result<Vec<f64>> {
    check_dims(h, circuit, initial)?;
    if theta.len() != circuit.n_params() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_params(),
            found: theta.len(),
        });
    }
    energy_and_shift_gradient(h, circuit, theta, initial, |_| {}).map(|(_, g)| g)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeTrialResult {
    pub label: String,
    pub theta_final: Vec<f64>,
    /// Energy at each iteration (Hartree).
    pub trace: Vec<f64>,
    pub e_final: f64,
    pub delta_e: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub seed: u64,
    /// Lowest energy among every cost evaluation, shifted points included.
    pub min_evaluated: f64,
    pub evaluations: usize,
}

/// Inputs for one VQE trial besides the Hamiltonian and circuit.
#[derive(Debug, Clone)]
pub struct TrialSetup<'a> {
    pub label: String,
    pub initial: &'a StateVector,
    pub theta0: Vec<f64>,
    pub seed: u64,
    pub e0: Option<f64>,
}

/// Minimizes `C(θ)` from `θ0`. Non-convergence is reported through
/// `converged`, never as an error; the best point seen is always returned.
pub fn run_vqe(
    h: &QubitHamiltonian,
    circuit: &Circuit,
    setup: TrialSetup<'_>,
    estimator: &EstimatorConfig,
    optimizer: &OptimizerConfig,
) -> Result<VqeTrialResult> {
    check_dims(h, circuit, setup.initial)?;
    if setup.theta0.len() != circuit.n_params() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_params(),
            found: setup.theta0.len(),
        });
    }
    optimizer.validate()?;
    let initial = setup.initial;
    let min_seen = Cell::new(f64::INFINITY);
    let evaluations = Cell::new(0usize);
    let note = |e: f64| {
        evaluations.set(evaluations.get() + 1);
        if e < min_seen.get() {
            min_seen.set(e);
        }
    };

    let outcome: Outcome = match (optimizer.method, estimator.mode) {
        (OptimizerMethod::GradientDescentAdam, EstimatorMode::Shots) => {
            return Err(Error::Unsupported(
                "gradient optimizers need the exact estimator; use nelder-mead with shots".into(),
            ))
        }
        (OptimizerMethod::GradientDescentAdam, EstimatorMode::Exact) => adam(
            |theta| energy_and_shift_gradient(h, circuit, theta, initial, note),
            &setup.theta0,
            optimizer,
        )?,
        (OptimizerMethod::NelderMead, mode) => {
            let mut call = 0u64;
            nelder_mead(
                |theta| {
                    let e = match mode {
                        EstimatorMode::Exact => energy_exact(h, circuit, theta, initial)?,
                        EstimatorMode::Shots => {
                            let cfg = EstimatorConfig {
                                seed: derive_seed(estimator.seed, call),
                                ..*estimator
                            };
                            call += 1;
                            expectation_shots(h, circuit, theta, initial, &cfg)?
                        }
                    };
                    note(e);
                    Ok(e)
                },
                &setup.theta0,
                optimizer,
            )?
        }
    };

    Ok(VqeTrialResult {
        label: setup.label,
        theta_final: outcome.best_theta,
        e_final: outcome.best_value,
        delta_e: setup.e0.map(|e0| outcome.best_value - e0),
        trace: outcome.trace,
        converged: outcome.converged,
        iterations: outcome.iterations,
        seed: setup.seed,
        min_evaluated: min_seen.get(),
        evaluations: evaluations.get(),
    })
}
