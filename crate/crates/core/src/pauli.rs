//! Pauli words and real-weighted Pauli-sum Hamiltonians.
//!
//! A word is stored in binary-symplectic form: bit `q` of `x_mask` is set when
//! the word has an X or Y on qubit `q`, bit `q` of `z_mask` when it has a Z or
//! Y. Text form writes qubit `n - 1` first, so `"IZ"` is Z on qubit 0.
//!
//! Acting on a basis state, a word with `k = popcount(x & z)` Y factors maps
//! `|b>` to `i^k (-1)^popcount(b & z) |b ^ x>`. Everything here (matrix-free
//! application, expectation values, dense materialization) is built on that
//! single identity.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::StateVector;

/// Largest qubit count for which a dense matrix may be materialized.
pub const DENSE_QUBIT_LIMIT: usize = 12;

/// Largest qubit count representable by a word.
pub const MAX_WORD_QUBITS: usize = 64;

const MERGE_DROP_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Axis::I),
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Axis::I => (false, false),
            Axis::X => (true, false),
            Axis::Y => (true, true),
            Axis::Z => (false, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliWord {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
}

impl PauliWord {
    pub fn identity(n_qubits: usize) -> Self {
        PauliWord {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
        }
    }

    /// Builds a word from its symplectic masks. Bits at or above `n_qubits`
    /// are rejected.
    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_WORD_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "word length {n_qubits} outside 1..={MAX_WORD_QUBITS}"
            )));
        }
        let valid = low_mask(n_qubits);
        if (x_mask | z_mask) & !valid != 0 {
            return Err(Error::InvalidArgument(format!(
                "mask bits beyond qubit {}",
                n_qubits - 1
            )));
        }
        Ok(PauliWord {
            n_qubits,
            x_mask,
            z_mask,
        })
    }

    /// Word with `axis` on each listed qubit and identity elsewhere.
    pub fn from_axes(n_qubits: usize, axes: &[(usize, Axis)]) -> Result<Self> {
        let mut x = 0u64;
        let mut z = 0u64;
        for &(q, axis) in axes {
            if q >= n_qubits {
                return Err(Error::InvalidArgument(format!(
                    "qubit {q} out of range for {n_qubits}-qubit word"
                )));
            }
            let (bx, bz) = axis.bits();
            x = (x & !(1 << q)) | ((bx as u64) << q);
            z = (z & !(1 << q)) | ((bz as u64) << q);
        }
        Self::from_masks(n_qubits, x, z)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn axis(&self, qubit: usize) -> Axis {
        let bx = (self.x_mask >> qubit) & 1 == 1;
        let bz = (self.z_mask >> qubit) & 1 == 1;
        match (bx, bz) {
            (false, false) => Axis::I,
            (true, false) => Axis::X,
            (true, true) => Axis::Y,
            (false, true) => Axis::Z,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// Qubits carrying a non-identity factor.
    pub fn support(&self) -> u64 {
        self.x_mask | self.z_mask
    }

    pub fn weight(&self) -> u32 {
        self.support().count_ones()
    }

    /// True when the two words commute (symplectic product is zero).
    pub fn commutes_with(&self, other: &PauliWord) -> bool {
        let s = (self.x_mask & other.z_mask).count_ones() + (self.z_mask & other.x_mask).count_ones();
        s.is_multiple_of(2)
    }

    /// Phase `i^k` contributed by the Y factors, as a power of `i` mod 4.
    fn y_phase(&self) -> u32 {
        (self.x_mask & self.z_mask).count_ones() % 4
    }

    /// Matrix element: `P|b> = phase(b) |b ^ x_mask>`.
    #[inline]
    pub fn phase_on(&self, basis: usize) -> Complex64 {
        let sign_flips = ((basis as u64) & self.z_mask).count_ones();
        i_power(self.y_phase() + 2 * (sign_flips % 2))
    }
}

#[inline]
fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn i_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (0..self.n_qubits).rev() {
            write!(f, "{}", self.axis(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let n = chars.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty Pauli word".into()));
        }
        if n > MAX_WORD_QUBITS {
            return Err(Error::InvalidArgument(format!(
                "word length {n} exceeds {MAX_WORD_QUBITS}"
            )));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (pos, &c) in chars.iter().enumerate() {
            let axis = Axis::from_char(c)
                .ok_or_else(|| Error::InvalidArgument(format!("illegal Pauli symbol '{c}'")))?;
            let q = n - 1 - pos;
            let (bx, bz) = axis.bits();
            x |= (bx as u64) << q;
            z |= (bz as u64) << q;
        }
        PauliWord::from_masks(n, x, z)
    }
}

/// Writes `out = P · input` without materializing P.
pub(crate) fn apply_word_into(word: &PauliWord, input: &[Complex64], out: &mut [Complex64]) {
    let flip = word.x_mask as usize;
    for (b, &amp) in input.iter().enumerate() {
        out[b ^ flip] = word.phase_on(b) * amp;
    }
}

/// Accumulates `out += coeff · P · input`.
pub(crate) fn accumulate_word(word: &PauliWord, coeff: f64, input: &[Complex64], out: &mut [Complex64]) {
    let flip = word.x_mask as usize;
    for (b, &amp) in input.iter().enumerate() {
        out[b ^ flip] += word.phase_on(b) * amp * coeff;
    }
}

/// Returns `P|s>`.
pub fn apply_word(word: &PauliWord, state: &StateVector) -> Result<StateVector> {
    if word.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: state.n_qubits(),
            found: word.n_qubits(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
    apply_word_into(word, state.amplitudes(), &mut out);
    Ok(StateVector::from_raw(state.n_qubits(), out))
}

/// Real-weighted sum of Pauli words over a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitHamiltonian {
    n_qubits: usize,
    terms: Vec<(f64, PauliWord)>,
    groups: Vec<FlipGroup>,
}

/// Terms sharing an X mask. Together they act as `|b> -> d(b) |b ^ flip>`
/// with `d(b) = sum_k c_k i^{y_k} (-1)^{popcount(b & z_k)}`, so one pass over
/// the amplitudes handles the whole group.
#[derive(Debug, Clone, PartialEq)]
struct FlipGroup {
    flip: usize,
    /// `(c_k i^{y_k}, z_k)`.
    terms: Vec<(Complex64, u64)>,
    /// `d(b)` for every basis index, when it fits in the cache budget.
    table: Option<Vec<Complex64>>,
}

/// Total number of cached `d(b)` entries across all groups.
const GROUP_TABLE_BUDGET: usize = 1 << 22;

impl FlipGroup {
    #[inline]
    fn factor(&self, b: usize) -> Complex64 {
        match &self.table {
            Some(t) => t[b],
            None => self
                .terms
                .iter()
                .map(|&(c, z)| if ((b as u64) & z).count_ones().is_multiple_of(2) { c } else { -c })
                .sum(),
        }
    }
}

fn build_groups(n_qubits: usize, terms: &[(f64, PauliWord)]) -> Vec<FlipGroup> {
    let mut groups: Vec<FlipGroup> = Vec::new();
    for (c, w) in terms {
        let entry = (i_power(w.y_phase()) * *c, w.z_mask);
        match groups.iter_mut().find(|g| g.flip == w.x_mask as usize) {
            Some(g) => g.terms.push(entry),
            None => groups.push(FlipGroup {
                flip: w.x_mask as usize,
                terms: vec![entry],
                table: None,
            }),
        }
    }
    let dim = 1usize << n_qubits;
    let mut budget = GROUP_TABLE_BUDGET;
    for g in &mut groups {
        // single-term groups are as cheap to evaluate directly
        if g.terms.len() < 2 || dim > budget {
            continue;
        }
        budget -= dim;
        g.table = Some((0..dim).map(|b| g.factor(b)).collect());
    }
    groups
}

impl QubitHamiltonian {
    /// Validates the terms and merges duplicates additively, keeping the
    /// position of each word's first occurrence. Merged coefficients below
    /// 1e-15 in magnitude are dropped.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliWord)>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("Hamiltonian needs at least one qubit".into()));
        }
        let mut merged: Vec<(f64, PauliWord)> = Vec::new();
        for (coeff, word) in terms {
            if !coeff.is_finite() {
                return Err(Error::InvalidArgument(format!("non-finite coefficient for {word}")));
            }
            if word.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    found: word.n_qubits(),
                });
            }
            match merged.iter_mut().find(|(_, w)| *w == word) {
                Some(entry) => entry.0 += coeff,
                None => merged.push((coeff, word)),
            }
        }
        merged.retain(|(c, _)| c.abs() >= MERGE_DROP_THRESHOLD);
        let groups = build_groups(n_qubits, &merged);
        Ok(QubitHamiltonian {
            n_qubits,
            terms: merged,
            groups,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[(f64, PauliWord)] {
        &self.terms
    }

    /// Sum of absolute coefficients, an upper bound on the spectral radius.
    pub fn one_norm(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        QubitHamiltonian::new(
            self.n_qubits,
            self.terms.iter().map(|&(c, w)| (c * factor, w)),
        )
    }

    /// One `<coefficient> <word>` line per term; reparses to the same term list.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, w) in &self.terms {
            out.push_str(&format!("{c} {w}\n"));
        }
        out
    }

    /// Writes `out = H · input`.
    pub fn apply_into(&self, input: &[Complex64], out: &mut [Complex64]) {
        out.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for g in &self.groups {
            for (b, &amp) in input.iter().enumerate() {
                out[b ^ g.flip] += g.factor(b) * amp;
            }
        }
    }

    /// `<v|H|v>` for an arbitrary vector, returned with its imaginary part.
    pub(crate) fn quadratic_form(&self, v: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for g in &self.groups {
            for (b, &amp) in v.iter().enumerate() {
                acc += v[b ^ g.flip].conj() * g.factor(b) * amp;
            }
        }
        acc
    }

    /// Dense `2^n x 2^n` matrix of the Hamiltonian.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n_qubits > DENSE_QUBIT_LIMIT {
            return Err(Error::TooManyQubits {
                what: "dense",
                qubits: self.n_qubits,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        let dim = self.dim();
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (c, w) in &self.terms {
            let flip = w.x_mask() as usize;
            for col in 0..dim {
                m[(col ^ flip, col)] += w.phase_on(col) * *c;
            }
        }
        Ok(m)
    }
}

/// Parses the term-per-line text format. `#` starts a comment; blank lines
/// are ignored; duplicate words are merged.
pub fn parse_hamiltonian(text: &str) -> Result<QubitHamiltonian> {
    let mut terms = Vec::new();
    let mut n_qubits: Option<usize> = None;
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let coeff_text = fields.next().unwrap_or_default();
        let word_text = fields.next().ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `<coefficient> <word>`".into(),
        })?;
        if let Some(extra) = fields.next() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unexpected trailing field '{extra}'"),
            });
        }
        let coeff: f64 = coeff_text.parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("malformed coefficient '{coeff_text}'"),
        })?;
        if !coeff.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("non-finite coefficient '{coeff_text}'"),
            });
        }
        let word: PauliWord = word_text.parse().map_err(|e: Error| Error::Parse {
            line: line_no,
            message: match e {
                Error::InvalidArgument(m) => m,
                other => other.to_string(),
            },
        })?;
        match n_qubits {
            None => n_qubits = Some(word.n_qubits()),
            Some(n) if n != word.n_qubits() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!(
                        "word '{word_text}' has length {}, expected {n}",
                        word.n_qubits()
                    ),
                })
            }
            _ => {}
        }
        terms.push((coeff, word));
    }
    let n = n_qubits.ok_or(Error::Parse {
        line: last_line.max(1),
        message: "empty document: no terms".into(),
    })?;
    QubitHamiltonian::new(n, terms)
}

/// `<s|H|s>` for a normalized state.
pub fn expectation_exact(h: &QubitHamiltonian, state: &StateVector) -> Result<f64> {
    if h.n_qubits() != state.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: state.n_qubits(),
        });
    }
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm_sqr));
    }
    let value = h.quadratic_form(state.amplitudes());
    debug_assert!(
        value.im.abs() <= 1e-12 * h.one_norm().max(1.0),
        "expectation has imaginary residue {}",
        value.im
    );
    Ok(value.re)
}
