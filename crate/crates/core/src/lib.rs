//! Statevector VQE with mutually-unbiased-basis restarts.
//!
//! The crate covers Pauli-sum Hamiltonians ([`pauli`]), a dense statevector
//! simulator ([`statevector`]), MUB construction and DQES start sets
//! ([`mub`]), ansatz builders ([`ansatz`]), cost estimation and the VQE loop
//! ([`vqe`], [`optim`]), exact ground-energy oracles ([`exact`]), campaign
//! orchestration ([`dqes`]), PES scans ([`pes`]) and report artifacts
//! ([`report`]).

pub mod ansatz;
pub mod dqes;
pub mod error;
pub mod exact;
pub mod mub;
pub mod optim;
pub mod parallel;
pub mod pauli;
pub mod pes;
pub mod problems;
pub mod report;
pub mod rng;
pub mod statevector;
pub mod vqe;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use pauli::{apply_word, expectation_exact, parse_hamiltonian, PauliWord, QubitHamiltonian};
pub use statevector::{basis_state, run_circuit, sample, Circuit, Gate, StateVector};
