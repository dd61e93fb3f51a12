//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails, after all of them have run.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use mubvqe::ansatz::{build_efficient_su2, build_uccsd_2q};
use mubvqe::dqes::{random_theta, run_campaign, CampaignConfig, Strategy, TrialCount, CHEMICAL_ACCURACY};
use mubvqe::exact::{ground_energy_dense, ground_energy_lanczos, LanczosConfig, SolverChoice};
use mubvqe::mub::{full_mubs, partial_dqes_states, two_qubit_mubs, MubBasis};
use mubvqe::pes::{grid_extrema, scan, ExtremumKind, ManifestRow, PesGrid, PesManifest, PesPoint};
use mubvqe::problems::{builtin, random_hamiltonian, random_two_local};
use mubvqe::vqe::{energy_exact, expectation_shots_detailed, gradient_parameter_shift, EstimatorConfig};
use mubvqe::{basis_state, Circuit, Complex64, StateVector};

struct Outcome {
    pass: bool,
    detail: String,
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_mubvqe")
}

/// Ground energy of `a IZ - a ZI - cz ZZ + b XX`, block by block.
fn block_ground(a: f64, b: f64, cz: f64) -> f64 {
    (cz - (4.0 * a * a + b * b).sqrt()).min(-cz - b.abs())
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (elapsed < limit, format!("{:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn random_state(n: usize, seed: u64) -> StateVector {
    let dim = 1usize << n;
    let raw = random_theta(2 * dim, seed);
    let amps: Vec<Complex64> = (0..dim).map(|k| Complex64::new(raw[2 * k], raw[2 * k + 1])).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(n, amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(bin()).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn c1_exact_oracle() -> Outcome {
    let cases = [
        ("h2o-2q", block_ground(0.297406, 0.038562, 0.074868), -0.521193),
        ("hcooh-2q", block_ground(0.147402, 0.015736, 0.050507), -0.244717),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (name, oracle, quoted) in cases {
        let start = Instant::now();
        let (code, stdout) = run_cli(&["diag", "--hamiltonian", name]);
        let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
        let json: serde_json::Value = serde_json::from_str(&stdout).unwrap_or_default();
        let e0 = json["e0"].as_f64().unwrap_or(f64::NAN);
        let ok = code == 0 && (e0 - oracle).abs() < 1e-6 && (e0 - quoted).abs() < 1e-6 && fast;
        pass &= ok;
        detail.push(format!("{name} E0={e0:.7} oracle={oracle:.7} in {time}"));
    }
    Outcome {
        pass,
        detail: detail.join("; "),
    }
}

fn c2_trial_counts() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = [2, 6, 10].iter().map(|&n| partial_dqes_states(n).unwrap().len()).collect();
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    Outcome {
        pass: counts == [19, 286, 856] && fast,
        detail: format!("counts {counts:?} in {time}"),
    }
}

/// Returns the outcome and the campaign's min ΔE for the stretch line.
fn c3_two_qubit_dqes() -> (Outcome, f64) {
    let h = builtin("hcooh-2q").unwrap();
    let start = Instant::now();
    let report = run_campaign(&h, &build_uccsd_2q(), &CampaignConfig::with_strategy(Strategy::MubPairs)).unwrap();
    let (fast, time) = within(start.elapsed(), Duration::from_secs(60));
    let theta_zero = report.trials.iter().all(|t| {
        let start_energy = energy_exact(&h, &build_uccsd_2q(), &[0.0; 3], &state_for(&t.label)).unwrap();
        t.trace.first().is_some_and(|e| (e - start_energy).abs() < 1e-14)
    });
    let pass = report.trials.len() == 19 && report.min_delta_e < CHEMICAL_ACCURACY && theta_zero && fast;
    (
        Outcome {
            pass,
            detail: format!(
                "{} trials, min dE {:.3e} (< {CHEMICAL_ACCURACY:e}), {} accurate, in {time}",
                report.trials.len(),
                report.min_delta_e,
                report.accurate_count
            ),
        },
        report.min_delta_e,
    )
}

fn state_for(label: &str) -> StateVector {
    partial_dqes_states(2)
        .unwrap()
        .entries
        .into_iter()
        .find(|e| e.label == label)
        .expect("label from the partial set")
        .state
}

fn mub_deviation(bases: &[MubBasis], n: usize) -> f64 {
    let d = 1usize << n;
    let mut worst: f64 = 0.0;
    if bases.len() != d + 1 {
        return f64::INFINITY;
    }
    for (i, a) in bases.iter().enumerate() {
        for (j, b) in bases.iter().enumerate() {
            for (p, sa) in a.states.iter().enumerate() {
                for (q, sb) in b.states.iter().enumerate() {
                    let o = sa.inner(sb).norm_sqr();
                    let want = match (i == j, p == q) {
                        (false, _) => 1.0 / d as f64,
                        (true, true) => 1.0,
                        (true, false) => 0.0,
                    };
                    worst = worst.max((o - want).abs());
                }
            }
        }
    }
    worst
}

fn c4_mub_suite() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        worst = worst.max(mub_deviation(&full_mubs(n).unwrap(), n));
    }
    worst = worst.max(mub_deviation(&two_qubit_mubs(), 2));
    let (fast, time) = within(start.elapsed(), Duration::from_secs(10));
    Outcome {
        pass: worst < 1e-12 && fast,
        detail: format!("max overlap deviation {worst:.2e} over n=1,2,3 and the 2-qubit table, in {time}"),
    }
}

fn c5_gradients() -> Outcome {
    let start = Instant::now();
    let step = 1e-5;
    let mut worst: f64 = 0.0;
    for k in 0..50u64 {
        let n = 1 + (k % 4) as usize;
        let h = random_hamiltonian(n, 6, 500 + k).unwrap();
        let circuit: Circuit = if n == 2 && k % 3 == 0 {
            build_uccsd_2q()
        } else {
            build_efficient_su2(n, 1 + (k % 3) as usize).unwrap()
        };
        let initial = random_state(n, 900 + k);
        let theta = random_theta(circuit.n_params(), 1300 + k);
        let shift = gradient_parameter_shift(&h, &circuit, &theta, &initial).unwrap();
        for (i, g) in shift.iter().enumerate() {
            let mut p = theta.clone();
            let mut m = theta.clone();
            p[i] += step;
            m[i] -= step;
            let fd = (energy_exact(&h, &circuit, &p, &initial).unwrap() - energy_exact(&h, &circuit, &m, &initial).unwrap())
                / (2.0 * step);
            worst = worst.max((g - fd).abs());
        }
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(60));
    Outcome {
        pass: worst < 1e-6 && fast,
        detail: format!("50 instances, max |shift - fd| {worst:.2e}, in {time}"),
    }
}

fn c6_variational_bound() -> Outcome {
    let h = random_two_local(6, 2024).unwrap();
    let circuit = build_efficient_su2(6, 3).unwrap();
    let start = Instant::now();
    let e0 = ground_energy_lanczos(&h, &LanczosConfig::default()).unwrap().e0;
    let mut pass = true;
    let mut detail = vec![format!("E0 (lanczos) {e0:.9}")];
    for strategy in [Strategy::MubPairs, Strategy::RandomBasis] {
        let cfg = CampaignConfig {
            trials: TrialCount::MatchMub,
            seed: 6,
            e0: Some(e0),
            workers: 8,
            ..CampaignConfig::with_strategy(strategy)
        };
        let report = run_campaign(&h, &circuit, &cfg).unwrap();
        let ok = report.trials.len() == 286 && report.min_evaluated >= e0 - 1e-9;
        pass &= ok;
        detail.push(format!(
            "{strategy}: {} trials, min evaluated {:.9}, min dE {:.3e}",
            report.trials.len(),
            report.min_evaluated,
            report.min_delta_e
        ));
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(30 * 60));
    detail.push(format!("in {time}"));
    Outcome {
        pass: pass && fast,
        detail: detail.join("; "),
    }
}

fn c7_estimator_consistency() -> Outcome {
    let h = builtin("hcooh-2q").unwrap();
    let initial = basis_state(2, 0).unwrap();
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let circuit = if k % 2 == 0 {
            build_uccsd_2q()
        } else {
            build_efficient_su2(2, 1 + (k % 3) as usize).unwrap()
        };
        let theta = random_theta(circuit.n_params(), 70 + k);
        let exact = energy_exact(&h, &circuit, &theta, &initial).unwrap();
        let est = expectation_shots_detailed(&h, &circuit, &theta, &initial, &EstimatorConfig::shots(1_000_000, k)).unwrap();
        let sigma = est.terms.iter().map(|t| t.variance).sum::<f64>().sqrt();
        let z = if sigma > 0.0 {
            (est.value - exact).abs() / sigma
        } else if (est.value - exact).abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(5 * 60));
    Outcome {
        pass: worst <= 5.0 && fast,
        detail: format!("20 points, 1e6 shots/term, max deviation {worst:.2} sigma, in {time}"),
    }
}

fn c8_dense_lanczos() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let n = 4 + (k % 7) as usize;
        let h = random_hamiltonian(n, 4 * n, 8000 + k).unwrap();
        let dense = ground_energy_dense(&h).unwrap().e0;
        let lanczos = ground_energy_lanczos(&h, &LanczosConfig { seed: k, ..Default::default() }).unwrap().e0;
        worst = worst.max((dense - lanczos).abs());
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(5 * 60));
    Outcome {
        pass: worst < 1e-8 && fast,
        detail: format!("20 Hamiltonians on 4..=10 qubits, max |dense - lanczos| {worst:.2e}, in {time}"),
    }
}

fn bowl_grid(f: impl Fn(f64, f64) -> f64) -> PesGrid {
    let axis: Vec<f64> = (0..5).map(|i| -1.0 + 0.5 * i as f64).collect();
    let mut points = Vec::new();
    for &x in &axis {
        for &y in &axis {
            points.push(PesPoint {
                row: points.len(),
                coords: vec![x, y],
                e0: f(x, y),
                method: mubvqe::exact::SolverMethod::Dense,
            });
        }
    }
    PesGrid {
        coord_labels: vec!["x".into(), "y".into()],
        points,
    }
}

fn c9_pes(dir: &Path) -> Outcome {
    let start = Instant::now();
    let h = builtin("h2o-2q").unwrap();
    let scales = [0.5, 1.0, 2.0];
    let rows = scales
        .iter()
        .map(|&s| {
            let path = dir.join(format!("h2o-x{s}.txt"));
            std::fs::write(&path, h.scaled(s).unwrap().to_text()).unwrap();
            ManifestRow {
                coords: vec![s],
                source: path.to_string_lossy().into_owned(),
            }
        })
        .collect();
    let manifest = PesManifest::new(vec!["s".into()], rows).unwrap();
    let grid = scan(&manifest, SolverChoice::Dense, &LanczosConfig::default()).grid;
    let base = grid.points[1].e0;
    let worst = grid
        .points
        .iter()
        .zip(scales)
        .map(|(p, s)| ((p.e0 - s * base) / (s * base)).abs())
        .fold(0.0, f64::max);
    let bowl = grid_extrema(&bowl_grid(|x, y| x * x + y * y)).unwrap();
    let saddle = grid_extrema(&bowl_grid(|x, y| x * x - y * y)).unwrap();
    let classified = bowl.len() == 1
        && bowl[0].kind == ExtremumKind::Minimum
        && bowl[0].coords == [0.0, 0.0]
        && saddle.len() == 1
        && saddle[0].kind == ExtremumKind::Saddle
        && saddle[0].coords == [0.0, 0.0];
    let (fast, time) = within(start.elapsed(), Duration::from_secs(10));
    Outcome {
        pass: worst < 1e-10 && (base - -0.521193).abs() < 1e-6 && classified && fast,
        detail: format!(
            "max relative scaling error {worst:.2e}, bowl/saddle classified: {classified}, in {time}"
        ),
    }
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap_or_default()
}

fn c10_determinism(dir: &Path) -> Outcome {
    let first = dir.join("first");
    let again = dir.join("again");
    let f = |d: &Path, name: &str| d.join(name).to_string_lossy().into_owned();
    let campaigns: [&[&str]; 2] = [
        &["--hamiltonian", "hcooh-2q", "--ansatz", "uccsd2", "--init", "mub-pairs"],
        &[
            "--hamiltonian",
            "h2o-2q",
            "--ansatz",
            "efficient-su2",
            "--reps",
            "2",
            "--init",
            "random-basis,random-params,mub-pairs",
            "--trials",
            "7",
            "--seed",
            "31",
            "--max-iter",
            "200",
        ],
    ];
    let mut pass = true;
    let mut compared = 0;
    for (k, flags) in campaigns.iter().enumerate() {
        let names = [format!("c{k}.json"), format!("c{k}-spread.csv"), format!("c{k}-trace.csv"), format!("c{k}-table.csv")];
        let outputs = |d: &Path| -> Vec<String> {
            ["--out", "--csv", "--trace", "--table"]
                .iter()
                .zip(&names)
                .flat_map(|(flag, name)| [flag.to_string(), f(d, name)])
                .collect()
        };
        let mut args: Vec<String> = vec!["dqes".into()];
        args.extend(flags.iter().map(|s| s.to_string()));
        args.extend(outputs(&first));
        let (code1, _) = run_cli(&args.iter().map(String::as_str).collect::<Vec<_>>());
        let mut replay = vec!["dqes".to_string(), "--replay".into(), f(&first, &names[0])];
        replay.extend(outputs(&again));
        let (code2, _) = run_cli(&replay.iter().map(String::as_str).collect::<Vec<_>>());
        pass &= code1 == 0 && code2 == 0;
        for name in &names {
            let (a, b) = (read(&first.join(name)), read(&again.join(name)));
            pass &= !a.is_empty() && a == b;
            compared += 1;
        }
    }
    Outcome {
        pass,
        detail: format!("{compared} artifacts from 2 campaigns replayed from their run records, byte-identical: {pass}"),
    }
}

#[test]
fn acceptance() {
    let dir = tempfile::tempdir().unwrap();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    results.push((1, "exact oracle", c1_exact_oracle()));
    results.push((2, "trial counts", c2_trial_counts()));
    let (c3, min_de) = c3_two_qubit_dqes();
    results.push((3, "2-qubit DQES accuracy", c3));
    results.push((4, "MUB properties", c4_mub_suite()));
    results.push((5, "parameter-shift gradients", c5_gradients()));
    results.push((6, "variational bound", c6_variational_bound()));
    results.push((7, "estimator consistency", c7_estimator_consistency()));
    results.push((8, "dense/lanczos equivalence", c8_dense_lanczos()));
    results.push((9, "PES linearity and extrema", c9_pes(dir.path())));
    results.push((10, "determinism", c10_determinism(dir.path())));

    println!();
    for (k, name, o) in &results {
        println!("criterion {k:>2} [{name}]: {} ({})", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    // Stretch target, reported but not asserted: the campaign cannot go below
    // the stationary value of the real-orthogonal 2-qubit UCCSD circuit.
    println!(
        "criterion  3 stretch [min dE < 1e-8]: {} (min dE {min_de:.3e})",
        if min_de < 1e-8 { "MET" } else { "NOT MET" }
    );
    let failed: Vec<usize> = results.iter().filter(|(_, _, o)| !o.pass).map(|(k, _, _)| *k).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
