//! Dense reference implementations used as test oracles. Everything here is
//! built from explicit 2x2 matrices, Kronecker products and a Taylor-series
//! matrix exponential, independently of the bit-twiddling kernels under test.
#![allow(dead_code)]

use mubvqe::{Circuit, Complex64, Gate, QubitHamiltonian, StateVector};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn pauli(ch: char) -> Mat {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    let entries = match ch {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        _ => panic!("bad Pauli symbol {ch}"),
    };
    Mat::from_row_slice(2, 2, &entries)
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    a.kronecker(b)
}

/// Leftmost character is the most significant qubit.
pub fn word_matrix(text: &str) -> Mat {
    text.chars()
        .map(pauli)
        .reduce(|acc, m| kron(&acc, &m))
        .expect("non-empty word")
}

pub fn hamiltonian_matrix(h: &QubitHamiltonian) -> Mat {
    let dim = h.dim();
    let mut m = Mat::zeros(dim, dim);
    for (coeff, word) in h.terms() {
        m += word_matrix(&word.to_string()) * c(*coeff, 0.0);
    }
    m
}

/// `exp(m)` by scaling and squaring with a 30-term Taylor series.
pub fn expm(m: &Mat) -> Mat {
    let norm = m.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = m / c(2f64.powi(squarings as i32), 0.0);
    let dim = m.nrows();
    let mut result = Mat::identity(dim, dim);
    let mut term = Mat::identity(dim, dim);
    for k in 1..30 {
        term = &term * &scaled / c(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `op` on `qubit` of an `n`-qubit register.
pub fn embed_single(op: &Mat, qubit: usize, n: usize) -> Mat {
    (0..n)
        .rev()
        .map(|q| if q == qubit { op.clone() } else { pauli('I') })
        .reduce(|acc, m| kron(&acc, &m))
        .unwrap()
}

pub fn gate_matrix(gate: &Gate, angle: f64, n: usize) -> Mat {
    let minus_i_half = c(0.0, -angle / 2.0);
    match gate {
        Gate::X { qubit } => embed_single(&pauli('X'), *qubit, n),
        Gate::H { qubit } => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            embed_single(&Mat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]), *qubit, n)
        }
        Gate::S { qubit } => embed_single(&Mat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]), *qubit, n),
        Gate::Sdg { qubit } => embed_single(&Mat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]), *qubit, n),
        Gate::Ry { qubit, .. } => embed_single(&expm(&(pauli('Y') * minus_i_half)), *qubit, n),
        Gate::Rz { qubit, .. } => embed_single(&expm(&(pauli('Z') * minus_i_half)), *qubit, n),
        Gate::Cx { control, target } => {
            let p0 = Mat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
            let p1 = Mat::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
            let on_control = embed_single(&p0, *control, n);
            let flip = embed_single(&p1, *control, n) * embed_single(&pauli('X'), *target, n);
            on_control + flip
        }
        Gate::PauliEvolution { word, .. } => expm(&(word_matrix(&word.to_string()) * minus_i_half)),
    }
}

pub fn circuit_unitary(circuit: &Circuit, theta: &[f64]) -> Mat {
    let n = circuit.n_qubits();
    let dim = 1 << n;
    circuit.gates().iter().fold(Mat::identity(dim, dim), |acc, g| {
        let angle = g.slot().map_or(0.0, |s| theta[s]);
        gate_matrix(g, angle, n) * acc
    })
}

pub fn to_vector(s: &StateVector) -> DVector<Complex64> {
    DVector::from_column_slice(s.amplitudes())
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << n)
        .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

/// Ground energy of `a IZ - a ZI - cz ZZ + b XX` from its two 2x2 blocks:
/// span{|01>, |10>} has eigenvalues `cz ± sqrt(4a² + b²)`, span{|00>, |11>}
/// has `-cz ± |b|`.
pub fn block_ground(a: f64, b: f64, cz: f64) -> f64 {
    (cz - (4.0 * a * a + b * b).sqrt()).min(-cz - b.abs())
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
