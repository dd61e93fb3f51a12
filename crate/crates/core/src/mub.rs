//! Mutually unbiased bases and the DQES initial-state sets built from them.
//!
//! Each basis is the joint eigenbasis of a maximal commuting class of Pauli
//! words. For `n` qubits the `2^n + 1` classes are the Z-type words plus, for
//! every field element `α` of GF(2^n), the words with symplectic form
//! `(a | A_α a)` where `A_α[i][j] = Tr(α · x^i · x^j)`. The trace form is
//! symmetric, so each class commutes, and `A_α - A_β = A_{α-β}` is invertible
//! for `α ≠ β`, so distinct classes share no word.
//!
//! States are ordered by the eigenvalue pattern of the class generators: bit
//! `k` of the state index is set when generator `k` has eigenvalue `-1`. Each
//! state's first nonzero amplitude is made real and positive.

use num_complex::Complex64;
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{accumulate_word, PauliWord};
use crate::rng::rng_from_seed;
use crate::statevector::{basis_state, StateVector};

/// Largest qubit count for which the full set of bases is built.
pub const FULL_MUB_QUBIT_LIMIT: usize = 5;

/// Number of two-qubit MUB states kept per pair (the pair-local `|00>` is dropped).
pub const STATES_PER_PAIR: usize = 19;

#[derive(Debug, Clone, PartialEq)]
pub struct MubBasis {
    pub label: String,
    /// Generators of the commuting class this basis diagonalizes.
    pub generators: Vec<PauliWord>,
    pub states: Vec<StateVector>,
}

impl MubBasis {
    pub fn dim(&self) -> usize {
        self.states.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialState {
    pub label: String,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialStateSet {
    pub n_qubits: usize,
    pub entries: Vec<InitialState>,
}

impl InitialStateSet {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| e.label.as_str())
    }
}

/// Serializable listing of a set: labels and amplitudes.
#[derive(Debug, Clone, Serialize)]
pub struct StateListing {
    pub label: String,
    pub amplitudes: Vec<(f64, f64)>,
}

impl InitialStateSet {
    pub fn listing(&self) -> Vec<StateListing> {
        self.entries
            .iter()
            .map(|e| StateListing {
                label: e.label.clone(),
                amplitudes: e.state.amplitudes().iter().map(|a| (a.re, a.im)).collect(),
            })
            .collect()
    }
}

/// Joint eigenbasis of `generators`, which must be `n` independent
/// commuting words on `n` qubits.
pub fn stabilizer_eigenbasis(generators: &[PauliWord]) -> Result<Vec<StateVector>> {
    let n = generators.first().map(PauliWord::n_qubits).ok_or_else(|| {
        Error::InvalidArgument("at least one generator is required".into())
    })?;
    if generators.len() != n || generators.iter().any(|g| g.n_qubits() != n) {
        return Err(Error::InvalidArgument(format!(
            "need exactly {n} generators on {n} qubits"
        )));
    }
    for (i, a) in generators.iter().enumerate() {
        for b in &generators[i + 1..] {
            if !a.commutes_with(b) {
                return Err(Error::InvalidArgument(format!("{a} and {b} anticommute")));
            }
        }
    }
    let dim = 1usize << n;
    let mut states = Vec::with_capacity(dim);
    for signs in 0..dim {
        let state = (0..dim)
            .find_map(|start| {
                let mut v = basis_state(n, start).ok()?.into_amplitudes();
                project(&mut v, generators, signs);
                let norm_sqr: f64 = v.iter().map(|a| a.norm_sqr()).sum();
                (norm_sqr > 0.5 / dim as f64).then_some(v)
            })
            .ok_or_else(|| {
                Error::InvalidArgument("generators are not independent".into())
            })?;
        states.push(canonical(n, state));
    }
    Ok(states)
}

/// Applies `prod_k (I + s_k G_k) / 2` with `s_k = -1` where bit `k` of `signs` is set.
fn project(v: &mut Vec<Complex64>, generators: &[PauliWord], signs: usize) {
    let mut scratch = vec![Complex64::new(0.0, 0.0); v.len()];
    for (k, g) in generators.iter().enumerate() {
        let sign = if (signs >> k) & 1 == 1 { -0.5 } else { 0.5 };
        scratch.iter_mut().zip(v.iter()).for_each(|(s, a)| *s = a * 0.5);
        accumulate_word(g, sign, v, &mut scratch);
        std::mem::swap(v, &mut scratch);
    }
}

fn canonical(n: usize, mut v: Vec<Complex64>) -> StateVector {
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let lead = v.iter().find(|a| a.norm() > 1e-12).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    for a in v.iter_mut() {
        *a = *a * phase / norm;
        // scrub rounding noise so canonical states compare exactly
        if a.re.abs() < 1e-15 {
            a.re = 0.0;
        }
        if a.im.abs() < 1e-15 {
            a.im = 0.0;
        }
    }
    StateVector::from_raw(n, v)
}

/// The five 2-qubit MUBs from the commuting triples
/// {ZI,IZ,ZZ}, {XI,IX,XX}, {YI,IY,YY}, {XY,YZ,ZX}, {YX,ZY,XZ}.
pub fn two_qubit_mubs() -> Vec<MubBasis> {
    const CLASSES: [(&str, &str); 5] = [("IZ", "ZI"), ("IX", "XI"), ("IY", "YI"), ("XY", "YZ"), ("YX", "ZY")];
    CLASSES
        .iter()
        .enumerate()
        .map(|(b, (g0, g1))| {
            let generators = vec![g0.parse().expect("static word"), g1.parse().expect("static word")];
            let states = stabilizer_eigenbasis(&generators).expect("static commuting pair");
            MubBasis {
                label: format!("b{b}"),
                generators,
                states,
            }
        })
        .collect()
}

const GF_MODULI: [u32; 6] = [0, 0b11, 0b111, 0b1011, 0b10011, 0b100101];

fn gf_mul(mut a: u32, mut b: u32, n: usize) -> u32 {
    let modulus = GF_MODULI[n];
    let mut acc = 0u32;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & (1 << n) != 0 {
            a ^= modulus;
        }
    }
    acc
}

/// Absolute trace GF(2^n) -> GF(2).
fn gf_trace(y: u32, n: usize) -> u32 {
    let mut acc = 0;
    let mut power = y;
    for _ in 0..n {
        acc ^= power;
        power = gf_mul(power, power, n);
    }
    debug_assert!(acc <= 1);
    acc
}

/// Full set of `2^n + 1` MUBs on `n` qubits; basis 0 is computational.
pub fn full_mubs(n: usize) -> Result<Vec<MubBasis>> {
    if !(1..=FULL_MUB_QUBIT_LIMIT).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "full MUBs are built for 1..={FULL_MUB_QUBIT_LIMIT} qubits, got {n}"
        )));
    }
    let mut classes: Vec<Vec<PauliWord>> = Vec::with_capacity((1 << n) + 1);
    classes.push(
        (0..n)
            .map(|q| PauliWord::from_masks(n, 0, 1 << q))
            .collect::<Result<_>>()?,
    );
    for alpha in 0..(1u32 << n) {
        let mut generators = Vec::with_capacity(n);
        for j in 0..n {
            let mut z = 0u64;
            for i in 0..n {
                let entry = gf_trace(gf_mul(alpha, gf_mul(1 << i, 1 << j, n), n), n);
                z |= (entry as u64) << i;
            }
            generators.push(PauliWord::from_masks(n, 1 << j, z)?);
        }
        classes.push(generators);
    }
    classes
        .into_iter()
        .enumerate()
        .map(|(b, generators)| {
            let states = stabilizer_eigenbasis(&generators)?;
            Ok(MubBasis {
                label: format!("b{b}"),
                generators,
                states,
            })
        })
        .collect()
}

fn bits_label(n: usize, bits: usize) -> String {
    (0..n).rev().map(|q| if (bits >> q) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Embeds a 2-qubit state on qubits `(lo, hi)` (local qubit 0 -> `lo`) with
/// the remaining qubits set to the classical pattern `rest`.
fn embed_pair(n: usize, lo: usize, hi: usize, local: &StateVector, rest: usize) -> StateVector {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let rest = rest & !((1 << lo) | (1 << hi));
    for (k, &a) in local.amplitudes().iter().enumerate() {
        let idx = rest | ((k & 1) << lo) | (((k >> 1) & 1) << hi);
        amps[idx] = a;
    }
    StateVector::from_raw(n, amps)
}

fn qubit_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
}

/// Closed-form size of [`partial_dqes_states`]: `C(n,2)·19 + [n > 2]`.
pub fn partial_dqes_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2 * STATES_PER_PAIR + usize::from(n > 2)
}

fn pair_entries(n: usize, mut rest_for: impl FnMut() -> Option<usize>) -> Vec<InitialState> {
    let bases = two_qubit_mubs();
    let mut entries = Vec::with_capacity(partial_dqes_count(n));
    for (lo, hi) in qubit_pairs(n) {
        for basis in &bases {
            for (s, local) in basis.states.iter().enumerate() {
                if basis.label == "b0" && s == 0 {
                    continue;
                }
                let mut label = format!("pair({lo},{hi}):{}s{s}", basis.label);
                let rest = match rest_for() {
                    Some(bits) => {
                        let bits = bits & !((1 << lo) | (1 << hi));
                        label.push_str(&format!(":rest={}", bits_label(n, bits)));
                        bits
                    }
                    None => 0,
                };
                entries.push(InitialState {
                    label,
                    state: embed_pair(n, lo, hi, local, rest),
                });
            }
        }
    }
    entries
}

/// Partial DQES set: every 2-qubit MUB state on every qubit pair with the
/// other qubits in `|0>`, the pair-local `|00>` dropped, and one global
/// all-zero state appended when `n > 2`.
pub fn partial_dqes_states(n: usize) -> Result<InitialStateSet> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("partial DQES needs n >= 2, got {n}")));
    }
    let mut entries = pair_entries(n, || None);
    if n > 2 {
        entries.push(InitialState {
            label: "zero".into(),
            state: basis_state(n, 0)?,
        });
    }
    Ok(InitialStateSet { n_qubits: n, entries })
}

/// As [`partial_dqes_states`] but with every non-pair qubit drawn as a random
/// classical bit. The single extra entry (the all-zero state in the partial
/// set) becomes a fully random classical pattern.
pub fn mub_pairs_random_rest(n: usize, seed: u64) -> Result<InitialStateSet> {
    if n <= 2 {
        return Err(Error::InvalidArgument(format!(
            "random-rest pair embedding needs n > 2, got {n}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let dim = 1usize << n;
    let mut entries = pair_entries(n, || Some(rng.random_range(0..dim)));
    let bits = rng.random_range(0..dim);
    entries.push(InitialState {
        label: format!("rest-only:{}", bits_label(n, bits)),
        state: basis_state(n, bits)?,
    });
    Ok(InitialStateSet { n_qubits: n, entries })
}

/// `count` computational basis states drawn uniformly with replacement.
pub fn random_basis_states(n: usize, count: usize, seed: u64) -> Result<InitialStateSet> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    basis_state(n, 0)?;
    let mut rng = rng_from_seed(seed);
    let entries = (0..count)
        .map(|k| {
            let idx = rng.random_range(0..1usize << n);
            Ok(InitialState {
                label: format!("rand{k}:{}", bits_label(n, idx)),
                state: basis_state(n, idx)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(InitialStateSet { n_qubits: n, entries })
}

/// Every state of every full MUB: `2^n (2^n + 1)` entries.
pub fn full_dqes_states(n: usize) -> Result<InitialStateSet> {
    let entries = full_mubs(n)?
        .into_iter()
        .flat_map(|b| {
            let label = b.label;
            b.states.into_iter().enumerate().map(move |(s, state)| InitialState {
                label: format!("{label}s{s}"),
                state,
            })
        })
        .collect();
    Ok(InitialStateSet { n_qubits: n, entries })
}

/// `|00...0>` as a one-entry set.
pub fn zero_state_set(n: usize) -> Result<InitialStateSet> {
    Ok(InitialStateSet {
        n_qubits: n,
        entries: vec![InitialState {
            label: "zero".into(),
            state: basis_state(n, 0)?,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn overlap_sqr(a: &StateVector, b: &StateVector) -> f64 {
        a.inner(b).norm_sqr()
    }

    #[test]
    fn two_qubit_basis_zero_is_computational() {
        let bases = two_qubit_mubs();
        assert_eq!(bases.len(), 5);
        for (s, state) in bases[0].states.iter().enumerate() {
            assert_eq!(state, &basis_state(2, s).unwrap());
        }
    }

    #[test]
    fn two_qubit_cross_overlap() {
        let bases = two_qubit_mubs();
        for a in &bases[1].states {
            for b in &bases[3].states {
                assert!((overlap_sqr(a, b) - 0.25).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn single_qubit_mubs() {
        let bases = full_mubs(1).unwrap();
        assert_eq!(bases.len(), 3);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [
            [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]],
            [[h, 0.0, h, 0.0], [h, 0.0, -h, 0.0]],
            [[h, 0.0, 0.0, h], [h, 0.0, 0.0, -h]],
        ];
        for (basis, want) in bases.iter().zip(expect) {
            for (state, w) in basis.states.iter().zip(want) {
                let a = state.amplitudes();
                let got = [a[0].re, a[0].im, a[1].re, a[1].im];
                for (g, e) in got.iter().zip(w) {
                    assert!((g - e).abs() < 1e-15, "{}: {got:?} vs {w:?}", basis.label);
                }
            }
        }
    }

    #[test]
    fn full_mub_bad_sizes() {
        assert!(full_mubs(0).is_err());
        assert!(full_mubs(6).is_err());
    }

    #[test]
    fn gf_tables_are_fields() {
        for n in 1..=FULL_MUB_QUBIT_LIMIT {
            for a in 1..(1u32 << n) {
                let has_inverse = (1..(1u32 << n)).any(|b| gf_mul(a, b, n) == 1);
                assert!(has_inverse, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn class_words_partition_the_nonidentity_paulis() {
        for n in 1..=4 {
            let bases = full_mubs(n).unwrap();
            let mut seen = HashSet::new();
            for b in &bases {
                // group generated by the class generators
                for subset in 1..(1u64 << n) {
                    let (mut x, mut z) = (0u64, 0u64);
                    for (k, g) in b.generators.iter().enumerate() {
                        if (subset >> k) & 1 == 1 {
                            x ^= g.x_mask();
                            z ^= g.z_mask();
                        }
                    }
                    assert!(seen.insert((x, z)), "n={n}: word repeated across classes");
                }
            }
            assert_eq!(seen.len(), (1 << (2 * n)) - 1);
        }
    }

    #[test]
    fn partial_counts() {
        assert_eq!(partial_dqes_states(2).unwrap().len(), 19);
        assert_eq!(partial_dqes_states(6).unwrap().len(), 286);
        assert_eq!(partial_dqes_states(10).unwrap().len(), 856);
        for n in 2..=12 {
            let expected = n * (n - 1) / 2 * 19 + usize::from(n > 2);
            assert_eq!(partial_dqes_count(n), expected);
            if n <= 9 {
                assert_eq!(partial_dqes_states(n).unwrap().len(), expected);
            }
        }
        assert!(partial_dqes_states(1).is_err());
    }

    #[test]
    fn partial_labels_unique_and_states_normalized() {
        let set = partial_dqes_states(4).unwrap();
        let labels: HashSet<_> = set.labels().collect();
        assert_eq!(labels.len(), set.len());
        assert!(set.entries.iter().all(|e| (e.state.norm_sqr() - 1.0).abs() < 1e-12));
    }

    #[test]
    fn random_rest_counts_and_determinism() {
        let a = mub_pairs_random_rest(6, 11).unwrap();
        let b = mub_pairs_random_rest(6, 11).unwrap();
        assert_eq!(a.len(), 286);
        assert_eq!(a, b);
        assert_eq!(a.listing().len(), 286);
        let labels: HashSet<_> = a.labels().collect();
        assert_eq!(labels.len(), a.len());
        assert!(mub_pairs_random_rest(2, 0).is_err());
    }

    #[test]
    fn random_basis_determinism() {
        let a = random_basis_states(4, 5, 3).unwrap();
        assert_eq!(a.len(), 5);
        assert!(a.entries.iter().all(|e| e.state.n_qubits() == 4));
        assert_eq!(a, random_basis_states(4, 5, 3).unwrap());
        assert!(random_basis_states(4, 0, 3).is_err());
    }

    #[test]
    fn random_basis_frequencies() {
        let set = random_basis_states(2, 10_000, 77).unwrap();
        let mut counts = [0usize; 4];
        for e in &set.entries {
            let idx = e.state.amplitudes().iter().position(|a| a.norm() > 0.5).unwrap();
            counts[idx] += 1;
        }
        // multinomial marginal: sigma = sqrt(N p (1-p))
        let sigma = (10_000.0f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - 2500.0).abs() < 5.0 * sigma, "{counts:?}");
        }
    }

    #[test]
    fn full_dqes_count() {
        assert_eq!(full_dqes_states(3).unwrap().len(), 8 * 9);
    }

    #[test]
    fn stabilizer_basis_rejects_anticommuting() {
        let g = vec!["XI".parse().unwrap(), "ZI".parse().unwrap()];
        assert!(stabilizer_eigenbasis(&g).is_err());
    }
}
