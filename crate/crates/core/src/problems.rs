//! Built-in Hamiltonians and seeded synthetic instances.

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::pauli::{parse_hamiltonian, PauliWord, QubitHamiltonian};
use crate::rng::rng_from_seed;

/// 2-qubit water Hamiltonian (no constant offset).
pub const H2O_2Q: &str = "\
0.297406 IZ
-0.297406 ZI
-0.074868 ZZ
0.038562 XX
";

/// 2-qubit formic acid Hamiltonian (no constant offset).
pub const HCOOH_2Q: &str = "\
0.147402 IZ
-0.147402 ZI
-0.050507 ZZ
0.015736 XX
";

pub const BUILTIN_NAMES: [&str; 2] = ["h2o-2q", "hcooh-2q"];

pub fn builtin(name: &str) -> Option<QubitHamiltonian> {
    let text = match name {
        "h2o-2q" => H2O_2Q,
        "hcooh-2q" => HCOOH_2Q,
        _ => return None,
    };
    Some(parse_hamiltonian(text).expect("built-in Hamiltonian parses"))
}

/// `n_terms` random words (duplicates merged) with coefficients uniform in [-1, 1).
pub fn random_hamiltonian(n: usize, n_terms: usize, seed: u64) -> Result<QubitHamiltonian> {
    if n == 0 || n > 24 || n_terms == 0 {
        return Err(Error::InvalidArgument(format!(
            "random Hamiltonian needs 1 <= n <= 24 and at least one term (n={n}, terms={n_terms})"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let full = (1u64 << n) - 1;
    let terms = (0..n_terms)
        .map(|_| {
            let x = rng.random::<u64>() & full;
            let z = rng.random::<u64>() & full;
            let c = rng.random_range(-1.0..1.0);
            Ok((c, PauliWord::from_masks(n, x, z)?))
        })
        .collect::<Result<Vec<_>>>()?;
    QubitHamiltonian::new(n, terms)
}

/// Every 1-local word and every 2-local word on each qubit pair, each with a
/// coefficient uniform in [-1, 1).
pub fn random_two_local(n: usize, seed: u64) -> Result<QubitHamiltonian> {
    if !(2..=24).contains(&n) {
        return Err(Error::InvalidArgument(format!("2-local instance needs 2 <= n <= 24, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let axes = [(1u64, 0u64), (1, 1), (0, 1)];
    let mut terms = Vec::new();
    for q in 0..n {
        for &(x, z) in &axes {
            terms.push((rng.random_range(-1.0..1.0), PauliWord::from_masks(n, x << q, z << q)?));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for &(xi, zi) in &axes {
                for &(xj, zj) in &axes {
                    let word = PauliWord::from_masks(n, (xi << i) | (xj << j), (zi << i) | (zj << j))?;
                    terms.push((rng.random_range(-1.0..1.0), word));
                }
            }
        }
    }
    QubitHamiltonian::new(n, terms)
}

/// Resolves a built-in name or a synthetic spec:
/// `random:<n>:<terms>:<seed>` or `two-local:<n>:<seed>`.
pub fn resolve_named(spec: &str) -> Option<Result<QubitHamiltonian>> {
    if let Some(h) = builtin(spec) {
        return Some(Ok(h));
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| -> Result<u64> {
        s.parse()
            .map_err(|_| Error::InvalidArgument(format!("bad number '{s}' in '{spec}'")))
    };
    match parts.as_slice() {
        ["random", n, terms, seed] => Some((|| random_hamiltonian(num(n)? as usize, num(terms)? as usize, num(seed)?))()),
        ["two-local", n, seed] => Some((|| random_two_local(num(n)? as usize, num(seed)?))()),
        _ => None,
    }
}

/// Built-in or synthetic name, otherwise a path to a Hamiltonian text file.
pub fn load_hamiltonian(spec: &str) -> Result<QubitHamiltonian> {
    if let Some(named) = resolve_named(spec) {
        return named;
    }
    let text = std::fs::read_to_string(spec).map_err(|e| Error::Io {
        path: spec.to_string(),
        message: e.to_string(),
    })?;
    parse_hamiltonian(&text)
}
