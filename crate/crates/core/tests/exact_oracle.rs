mod common;

use common::*;
use mubvqe::exact::{ground_energy, ground_energy_dense, ground_energy_lanczos, LanczosConfig, SolverChoice, SolverMethod};
use mubvqe::problems::{random_hamiltonian, random_two_local};
use mubvqe::{PauliWord, QubitHamiltonian};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;

fn block_hamiltonian(a: f64, b: f64, cz: f64) -> QubitHamiltonian {
    let w = |s: &str| s.parse::<PauliWord>().unwrap();
    QubitHamiltonian::new(2, [(a, w("IZ")), (-a, w("ZI")), (-cz, w("ZZ")), (b, w("XX"))]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dense_matches_closed_form_blocks(a in -1.0f64..1.0, b in -1.0f64..1.0, cz in -1.0f64..1.0) {
        let h = block_hamiltonian(a, b, cz);
        let want = block_ground(a, b, cz);
        prop_assert!((ground_energy_dense(&h).unwrap().e0 - want).abs() < 1e-10);
        let lz = ground_energy_lanczos(&h, &LanczosConfig::default()).unwrap();
        prop_assert!((lz.e0 - want).abs() < 1e-8);
    }

    #[test]
    fn dense_matches_reference_eigensolver(n in 1usize..=5, terms in 1usize..20, seed in any::<u64>()) {
        let h = random_hamiltonian(n, terms, seed).unwrap();
        let reference = SymmetricEigen::new(hamiltonian_matrix(&h)).eigenvalues.min();
        let sol = ground_energy_dense(&h).unwrap();
        prop_assert!((sol.e0 - reference).abs() < 1e-10);
        prop_assert!(sol.residual < 1e-9);
    }

    #[test]
    fn ground_energy_scales_linearly(n in 1usize..=4, seed in any::<u64>(), s in 0.1f64..5.0) {
        let h = random_hamiltonian(n, 10, seed).unwrap();
        let e = ground_energy_dense(&h).unwrap().e0;
        let es = ground_energy_dense(&h.scaled(s).unwrap()).unwrap().e0;
        prop_assert!((es - s * e).abs() < 1e-10 * (1.0 + s * e.abs()));
    }
}

#[test]
fn lanczos_matches_dense_across_sizes() {
    for k in 0..20u64 {
        let n = 4 + (k % 7) as usize;
        let h = random_hamiltonian(n, 3 * n, 1000 + k).unwrap();
        let dense = ground_energy_dense(&h).unwrap().e0;
        let lz = ground_energy_lanczos(&h, &LanczosConfig { seed: k, ..Default::default() }).unwrap();
        assert!((lz.e0 - dense).abs() < 1e-8, "n={n}: {} vs {dense}", lz.e0);
        assert_eq!(lz.method, SolverMethod::Lanczos);
    }
}

#[test]
fn lanczos_eigenvector_is_consistent() {
    let h = random_two_local(7, 3).unwrap();
    let sol = ground_energy_lanczos(&h, &LanczosConfig::default()).unwrap();
    let v = nalgebra::DVector::from_column_slice(&sol.eigenvector);
    let hv = hamiltonian_matrix(&h) * &v;
    assert!((hv - &v * c(sol.e0, 0.0)).norm() < 1e-8);
}

#[test]
fn auto_picks_by_size() {
    let small = random_hamiltonian(3, 5, 1).unwrap();
    let big = random_hamiltonian(9, 5, 1).unwrap();
    let cfg = LanczosConfig::default();
    assert_eq!(ground_energy(&small, SolverChoice::Auto, &cfg).unwrap().method, SolverMethod::Dense);
    assert_eq!(ground_energy(&big, SolverChoice::Auto, &cfg).unwrap().method, SolverMethod::Lanczos);
}
