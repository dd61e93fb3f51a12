//! Dense statevector simulation.
//!
//! Amplitude index bit `q` is the computational value of qubit `q`. All
//! parameterized gates use the half-angle convention `exp(-i θ G / 2)`.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{apply_word_into, PauliWord};
use crate::rng::rng_from_seed;

/// Largest qubit count the simulator will allocate a state for.
pub const STATE_QUBIT_LIMIT: usize = 24;

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalized state from explicit amplitudes.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubits(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << n_qubits,
                found: amplitudes.len(),
            });
        }
        let state = StateVector {
            n_qubits,
            amplitudes,
        };
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm_sqr));
        }
        Ok(state)
    }

    /// Wraps amplitudes without checking the norm. Callers are responsible
    /// for the length being `2^n_qubits`.
    pub fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.amplitudes.iter_mut().for_each(|a| *a /= norm);
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn apply_gate(&mut self, gate: &Gate, angle: f64) {
        apply_gate_slice(&mut self.amplitudes, gate, angle);
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("state needs at least one qubit".into()));
    }
    if n > STATE_QUBIT_LIMIT {
        return Err(Error::TooManyQubits {
            what: "statevector",
            qubits: n,
            limit: STATE_QUBIT_LIMIT,
        });
    }
    Ok(())
}

/// Computational basis state `|index>` on `n` qubits.
pub fn basis_state(n: usize, index: usize) -> Result<StateVector> {
    check_qubits(n)?;
    let dim = 1usize << n;
    if index >= dim {
        return Err(Error::InvalidArgument(format!(
            "basis index {index} out of range for {n} qubits"
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    amplitudes[index] = Complex64::new(1.0, 0.0);
    Ok(StateVector {
        n_qubits: n,
        amplitudes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Gate {
    X { qubit: usize },
    H { qubit: usize },
    S { qubit: usize },
    Sdg { qubit: usize },
    Ry { qubit: usize, slot: usize },
    Rz { qubit: usize, slot: usize },
    Cx { control: usize, target: usize },
    PauliEvolution {
        #[serde(with = "word_text")]
        word: PauliWord,
        slot: usize,
    },
}

mod word_text {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::pauli::PauliWord;

    pub fn serialize<S: Serializer>(w: &PauliWord, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(w)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<PauliWord, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Gate {
    pub fn slot(&self) -> Option<usize> {
        match self {
            Gate::Ry { slot, .. } | Gate::Rz { slot, .. } | Gate::PauliEvolution { slot, .. } => Some(*slot),
            _ => None,
        }
    }

    fn check_operands(&self, n_qubits: usize) -> Result<()> {
        let bad = |q: usize| q >= n_qubits;
        let ok = match self {
            Gate::X { qubit }
            | Gate::H { qubit }
            | Gate::S { qubit }
            | Gate::Sdg { qubit }
            | Gate::Ry { qubit, .. }
            | Gate::Rz { qubit, .. } => !bad(*qubit),
            Gate::Cx { control, target } => !bad(*control) && !bad(*target) && control != target,
            Gate::PauliEvolution { word, .. } => word.n_qubits() == n_qubits,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidCircuit(format!(
                "gate {self:?} has invalid operands for {n_qubits} qubits"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    n_params: usize,
}

impl Circuit {
    /// Validates operands and infers `n_params = max slot + 1`. Every slot in
    /// `0..n_params` must be referenced by some gate.
    pub fn new(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        check_qubits(n_qubits)?;
        for g in &gates {
            g.check_operands(n_qubits)?;
        }
        let n_params = gates.iter().filter_map(Gate::slot).max().map_or(0, |m| m + 1);
        let mut used = vec![false; n_params];
        for slot in gates.iter().filter_map(Gate::slot) {
            used[slot] = true;
        }
        if let Some(missing) = used.iter().position(|u| !u) {
            return Err(Error::InvalidCircuit(format!(
                "parameter slot {missing} is not referenced by any gate"
            )));
        }
        Ok(Circuit {
            n_qubits,
            gates,
            n_params,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_params(&self) -> usize {
        self.n_params
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn count_cx(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::Cx { .. })).count()
    }

    pub(crate) fn check_theta(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.n_params {
            return Err(Error::DimensionMismatch {
                expected: self.n_params,
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Applies the circuit in place. `shift` adds an angle offset to a single
    /// gate occurrence, which is what the parameter-shift rule needs for
    /// shared slots. The state's norm is not checked.
    pub fn apply_in_place(&self, theta: &[f64], state: &mut StateVector, shift: Option<(usize, f64)>) -> Result<()> {
        self.check_theta(theta)?;
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        for (idx, gate) in self.gates.iter().enumerate() {
            let mut angle = gate.slot().map_or(0.0, |s| theta[s]);
            if let Some((at, delta)) = shift {
                if at == idx {
                    angle += delta;
                }
            }
            state.apply_gate(gate, angle);
        }
        Ok(())
    }
}

/// `U(θ)|s0>`.
pub fn run_circuit(circuit: &Circuit, theta: &[f64], initial: &StateVector) -> Result<StateVector> {
    let mut state = initial.clone();
    circuit.apply_in_place(theta, &mut state, None)?;
    Ok(state)
}

#[inline]
fn apply_single(amps: &mut [Complex64], qubit: usize, m: [[Complex64; 2]; 2]) {
    let stride = 1usize << qubit;
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for i in base..base + stride {
            let a0 = amps[i];
            let a1 = amps[i + stride];
            amps[i] = m[0][0] * a0 + m[0][1] * a1;
            amps[i + stride] = m[1][0] * a0 + m[1][1] * a1;
        }
        base += 2 * stride;
    }
}

/// Applies one gate to a raw amplitude slice with the parameter already
/// resolved to `angle` (ignored for fixed gates).
pub(crate) fn apply_gate_slice(amps: &mut [Complex64], gate: &Gate, angle: f64) {
    let zero = Complex64::new(0.0, 0.0);
    match gate {
        Gate::X { qubit } => {
            let stride = 1usize << qubit;
            for i in 0..amps.len() {
                if i & stride == 0 {
                    amps.swap(i, i | stride);
                }
            }
        }
        Gate::H { qubit } => {
            let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
            apply_single(amps, *qubit, [[h, h], [h, -h]]);
        }
        Gate::S { qubit } | Gate::Sdg { qubit } => {
            let phase = if matches!(gate, Gate::S { .. }) {
                Complex64::new(0.0, 1.0)
            } else {
                Complex64::new(0.0, -1.0)
            };
            let mask = 1usize << qubit;
            for (i, a) in amps.iter_mut().enumerate() {
                if i & mask != 0 {
                    *a *= phase;
                }
            }
        }
        Gate::Ry { qubit, .. } => {
            let (s, c) = (angle / 2.0).sin_cos();
            let (c, s) = (Complex64::new(c, 0.0), Complex64::new(s, 0.0));
            apply_single(amps, *qubit, [[c, -s], [s, c]]);
        }
        Gate::Rz { qubit, .. } => {
            let lower = Complex64::from_polar(1.0, -angle / 2.0);
            let upper = Complex64::from_polar(1.0, angle / 2.0);
            apply_single(amps, *qubit, [[lower, zero], [zero, upper]]);
        }
        Gate::Cx { control, target } => {
            let c = 1usize << control;
            let t = 1usize << target;
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::PauliEvolution { word, .. } => {
            // exp(-iθP/2) = cos(θ/2) I - i sin(θ/2) P
            let (s, c) = (angle / 2.0).sin_cos();
            let mut flipped = vec![zero; amps.len()];
            apply_word_into(word, amps, &mut flipped);
            let minus_i_s = Complex64::new(0.0, -s);
            for (a, p) in amps.iter_mut().zip(&flipped) {
                *a = *a * c + *p * minus_i_s;
            }
        }
    }
}

/// Draws `shots` computational-basis outcomes from `|amplitude|^2`.
pub fn sample(state: &StateVector, shots: u64, seed: u64) -> Result<BTreeMap<usize, u64>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized(norm_sqr));
    }
    let mut cumulative = Vec::with_capacity(state.dim());
    let mut total = 0.0;
    for p in state.probabilities() {
        total += p;
        cumulative.push(total);
    }
    let mut rng = rng_from_seed(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        let u: f64 = rng.random::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(cumulative.len() - 1);
        *counts.entry(idx).or_insert(0) += 1;
    }
    Ok(counts)
}
