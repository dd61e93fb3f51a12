use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mubvqe(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mubvqe"))
        .args(args)
        .current_dir(dir)
        .env_remove("MUBVQE_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn unknown_subcommand_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&mubvqe(&["frobnicate"], dir.path())), 1);
    assert_eq!(code(&mubvqe(&["--help"], dir.path())), 0);
}

#[test]
fn diag_prints_json_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = mubvqe(&["diag", "--hamiltonian", "h2o-2q"], dir.path());
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["e0"].as_f64().unwrap() + 0.521193).abs() < 1e-6);
    assert_eq!(report["n_qubits"], 2);
    assert_eq!(report["run_record"]["subcommand"], "diag");
}

#[test]
fn missing_hamiltonian_file_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = mubvqe(&["diag", "--hamiltonian", "absent.txt"], dir.path());
    assert_eq!(code(&out), 1);
}

#[test]
fn optimizer_budget_exhaustion_exits_two_with_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = mubvqe(
        &["vqe", "--hamiltonian", "h2o-2q", "--max-iter", "2", "--out", "v.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("v.json")).unwrap()).unwrap();
    assert_eq!(report["trial"]["converged"], false);
}

#[test]
fn output_may_not_overwrite_input() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("h.txt"), "0.5 ZZ\n-0.25 XI\n").unwrap();
    let out = mubvqe(&["diag", "--hamiltonian", "h.txt", "--out", "h.txt"], dir.path());
    assert_eq!(code(&out), 1);
    assert_eq!(fs::read_to_string(dir.path().join("h.txt")).unwrap(), "0.5 ZZ\n-0.25 XI\n");
}

#[test]
fn empty_manifest_warns_and_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.csv"), "R,path\n").unwrap();
    let out = mubvqe(&["scan", "--manifest", "m.csv", "--out", "grid.csv"], dir.path());
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("no rows"));
    let grid = fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert_eq!(grid.lines().filter(|l| !l.starts_with('#')).count(), 1);
}

#[test]
fn scan_reports_failed_rows_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.txt"), "1.0 Z\n").unwrap();
    fs::write(dir.path().join("m.csv"), "R,path\n0.5,a.txt\n1.0,missing.txt\n").unwrap();
    let out = mubvqe(&["scan", "--manifest", "m.csv", "--out", "grid.csv"], dir.path());
    assert_eq!(code(&out), 1);
    let grid = fs::read_to_string(dir.path().join("grid.csv")).unwrap();
    assert!(grid.lines().any(|l| l.starts_with("0.5,")));
}

#[test]
fn mubs_lists_every_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let out = mubvqe(&["mubs", "--qubits", "2", "--out", "m.csv"], dir.path());
    assert_eq!(code(&out), 0);
    let rows = fs::read_to_string(dir.path().join("m.csv")).unwrap();
    let data = rows.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(data, 1 + 5 * 4 * 4);
}

#[test]
fn dqes_rejects_unknown_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let out = mubvqe(&["dqes", "--hamiltonian", "h2o-2q", "--init", "bogus"], dir.path());
    assert_eq!(code(&out), 1);
}
