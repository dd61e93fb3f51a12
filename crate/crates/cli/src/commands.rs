use std::fs;
use std::path::Path;

use mubvqe::dqes::{compare_strategies, random_theta, run_campaign, CampaignConfig, Comparison, ComparisonRow, DqesReport};
use mubvqe::exact::{ground_energy, SolverMethod};
use mubvqe::mub::{full_mubs, two_qubit_mubs};
use mubvqe::parallel::with_pool;
use mubvqe::pes::{grid_extrema, scan as scan_manifest, Extremum, PesManifest};
use mubvqe::problems::{load_hamiltonian, resolve_named};
use mubvqe::report::{emit_trace_csv, mub_csv, spread_csv};
use mubvqe::rng::derive_seed;
use mubvqe::vqe::{run_vqe, EstimatorConfig, TrialSetup, VqeTrialResult};
use mubvqe::{basis_state, Error, QubitHamiltonian};
use serde::Serialize;

use crate::args::{DiagArgs, DqesArgs, MubsArgs, ScanArgs, VqeArgs};
use crate::config::{
    load_replay, required, DiagConfig, DqesConfig, MubsConfig, ScanConfig, SolverConfig, TrialConfig, VqeConfig,
};
use crate::output::{emit, Artifacts};
use crate::Failure;

#[derive(Serialize)]
struct DiagReport {
    n_qubits: usize,
    n_terms: usize,
    converged: bool,
    e0: f64,
    method: SolverMethod,
    residual: f64,
    iterations: usize,
}

#[derive(Serialize)]
struct FailureReport {
    error: String,
    best_estimate: Option<f64>,
}

#[derive(Serialize)]
struct VqeReport<'a> {
    n_qubits: usize,
    n_params: usize,
    e0: f64,
    e0_method: Option<SolverMethod>,
    trial: &'a VqeTrialResult,
}

#[derive(Serialize)]
struct ComparisonReport<'a> {
    e0: f64,
    e0_method: Option<SolverMethod>,
    rows: &'a [ComparisonRow],
    campaigns: &'a [DqesReport],
}

#[derive(Serialize)]
struct ExtremaReport<'a> {
    coord_labels: &'a [String],
    extrema: &'a [Extremum],
}

fn load_problem(spec: &str, artifacts: &mut Artifacts) -> Result<QubitHamiltonian, Failure> {
    if resolve_named(spec).is_none() {
        artifacts.input(spec);
    }
    Ok(load_hamiltonian(spec)?)
}

fn note_ansatz_input(spec: &str, artifacts: &mut Artifacts) {
    if let Some(path) = spec.strip_prefix("file:") {
        artifacts.input(path);
    }
}

/// Writes a failure document to `out` when the ground-energy oracle fails,
/// then converts the error.
fn report_failure(artifacts: &mut Artifacts, out: Option<&Path>, err: Error) -> Failure {
    let best_estimate = match err {
        Error::NotConverged { best_estimate, .. } => Some(best_estimate),
        _ => None,
    };
    if out.is_some() {
        artifacts.finish();
        let body = FailureReport {
            error: err.to_string(),
            best_estimate,
        };
        if let Err(f) = emit(out, &artifacts.json(&body)) {
            return f;
        }
    }
    err.into()
}

fn resolve_e0(
    h: &QubitHamiltonian,
    known: Option<f64>,
    solver: &SolverConfig,
) -> Result<(f64, Option<SolverMethod>), Error> {
    match known {
        Some(e0) => Ok((e0, None)),
        None => ground_energy(h, solver.solver, &solver.lanczos).map(|s| (s.e0, Some(s.method))),
    }
}

pub fn diag(args: DiagArgs) -> Result<(), Failure> {
    let cfg: DiagConfig = match &args.output.replay {
        Some(path) => load_replay(path, "diag")?,
        None => DiagConfig {
            hamiltonian: required(args.hamiltonian.as_deref(), "--hamiltonian")?,
            solver: SolverConfig::from_args(&args.solver, args.seed.unwrap_or(0))?,
        },
    };
    let mut artifacts = Artifacts::new("diag", &cfg, vec![cfg.solver.lanczos.seed], args.output.timing);
    if let Some(r) = &args.output.replay {
        artifacts.input(r);
    }
    let h = load_problem(&cfg.hamiltonian, &mut artifacts)?;
    artifacts.outputs(&[args.out.as_deref()])?;

    let (report, outcome) = match ground_energy(&h, cfg.solver.solver, &cfg.solver.lanczos) {
        Ok(sol) => (
            DiagReport {
                n_qubits: h.n_qubits(),
                n_terms: h.terms().len(),
                converged: true,
                e0: sol.e0,
                method: sol.method,
                residual: sol.residual,
                iterations: sol.iterations,
            },
            Ok(()),
        ),
        Err(e @ Error::NotConverged { best_estimate, residual, iterations }) => (
            DiagReport {
                n_qubits: h.n_qubits(),
                n_terms: h.terms().len(),
                converged: false,
                e0: best_estimate,
                method: SolverMethod::Lanczos,
                residual,
                iterations,
            },
            Err(Failure::from(e)),
        ),
        Err(e) => return Err(e.into()),
    };
    artifacts.finish();
    emit(args.out.as_deref(), &artifacts.json(&report))?;
    let method = match report.method {
        SolverMethod::Dense => "dense",
        SolverMethod::Lanczos => "lanczos",
    };
    let summary = format!(
        "E0 = {:.9} ({method}, residual {:.2e}, {} qubits)",
        report.e0, report.residual, report.n_qubits
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    outcome
}

pub fn vqe(args: VqeArgs) -> Result<(), Failure> {
    let cfg: VqeConfig = match &args.output.replay {
        Some(path) => load_replay(path, "vqe")?,
        None => VqeConfig {
            trial: TrialConfig::from_args(args.hamiltonian.as_deref(), &args.opt)?,
            basis_state: args.basis_state.unwrap_or(0),
            random_theta: args.random_theta,
        },
    };
    let t = &cfg.trial;
    let mut artifacts = Artifacts::new("vqe", &cfg, vec![t.seed], args.output.timing);
    if let Some(r) = &args.output.replay {
        artifacts.input(r);
    }
    let h = load_problem(&t.hamiltonian, &mut artifacts)?;
    note_ansatz_input(&t.ansatz, &mut artifacts);
    let circuit = t.circuit(h.n_qubits())?;
    let initial = basis_state(h.n_qubits(), cfg.basis_state)?;
    artifacts.outputs(&[args.out.as_deref(), args.trace.as_deref()])?;

    let (e0, e0_method) = resolve_e0(&h, t.e0, &t.solver).map_err(|e| report_failure(&mut artifacts, args.out.as_deref(), e))?;
    let theta0 = if cfg.random_theta {
        random_theta(circuit.n_params(), derive_seed(t.seed, 0))
    } else {
        vec![0.0; circuit.n_params()]
    };
    let estimator = EstimatorConfig {
        seed: derive_seed(t.seed, 1),
        ..t.estimator
    };
    let trial = run_vqe(
        &h,
        &circuit,
        TrialSetup {
            label: format!("basis{}", cfg.basis_state),
            initial: &initial,
            theta0,
            seed: t.seed,
            e0: Some(e0),
        },
        &estimator,
        &t.optimizer,
    )?;
    artifacts.finish();
    let report = VqeReport {
        n_qubits: h.n_qubits(),
        n_params: circuit.n_params(),
        e0,
        e0_method,
        trial: &trial,
    };
    if args.out.is_some() {
        emit(args.out.as_deref(), &artifacts.json(&report))?;
    }
    if let Some(path) = args.trace.as_deref() {
        emit(Some(path), &artifacts.csv(&emit_trace_csv(&trial)?))?;
    }
    println!(
        "E_final = {:.9}, dE = {:.3e} after {} iterations ({})",
        trial.e_final,
        trial.e_final - e0,
        trial.iterations,
        if trial.converged { "converged" } else { "iteration budget exhausted" }
    );
    if trial.converged {
        Ok(())
    } else {
        Err(Failure::NotConverged(format!(
            "optimizer stopped at the {}-iteration limit",
            t.optimizer.max_iterations
        )))
    }
}

pub fn dqes(args: DqesArgs) -> Result<(), Failure> {
    let cfg: DqesConfig = match &args.output.replay {
        Some(path) => load_replay(path, "dqes")?,
        None => DqesConfig {
            trial: TrialConfig::from_args(args.hamiltonian.as_deref(), &args.opt)?,
            strategies: DqesConfig::parse_strategies(args.init.as_deref())?,
            trials: DqesConfig::parse_trials(args.trials.as_deref())?,
            mu: args.mu.unwrap_or_else(DqesConfig::default_mu),
            log_scale: args.log_scale,
        },
    };
    let t = &cfg.trial;
    let mut artifacts = Artifacts::new("dqes", &cfg, vec![t.seed], args.output.timing);
    if let Some(r) = &args.output.replay {
        artifacts.input(r);
    }
    let h = load_problem(&t.hamiltonian, &mut artifacts)?;
    note_ansatz_input(&t.ansatz, &mut artifacts);
    let circuit = t.circuit(h.n_qubits())?;
    artifacts.outputs(&[
        args.out.as_deref(),
        args.csv.as_deref(),
        args.table.as_deref(),
        args.trace.as_deref(),
    ])?;

    let (e0, e0_method) = resolve_e0(&h, t.e0, &t.solver).map_err(|e| report_failure(&mut artifacts, args.out.as_deref(), e))?;
    let campaigns: Vec<CampaignConfig> = cfg
        .strategies
        .iter()
        .map(|&strategy| CampaignConfig {
            strategy,
            trials: cfg.trials,
            seed: t.seed,
            estimator: t.estimator,
            optimizer: t.optimizer,
            mu: cfg.mu,
            workers: args.workers,
            e0: Some(e0),
            solver: t.solver.solver,
        })
        .collect();
    let mut comparison: Comparison = if campaigns.len() == 1 {
        let report = run_campaign(&h, &circuit, &campaigns[0])?;
        Comparison {
            e0,
            rows: vec![ComparisonRow {
                strategy: report.strategy,
                trials: report.trials.len(),
                mean_delta_e: report.mean_delta_e,
                min_delta_e: report.min_delta_e,
                accurate_count: report.accurate_count,
            }],
            campaigns: vec![report],
        }
    } else {
        compare_strategies(&h, &circuit, &campaigns)?
    };
    for c in &mut comparison.campaigns {
        c.e0_method = e0_method;
    }
    artifacts.finish();

    if args.out.is_some() {
        let json = if let [single] = comparison.campaigns.as_slice() {
            artifacts.json(single)
        } else {
            artifacts.json(&ComparisonReport {
                e0,
                e0_method,
                rows: &comparison.rows,
                campaigns: &comparison.campaigns,
            })
        };
        emit(args.out.as_deref(), &json)?;
    }
    if let Some(path) = args.csv.as_deref() {
        let body = match comparison.campaigns.as_slice() {
            [single] => spread_csv(single, cfg.log_scale),
            many => {
                let mut body = String::from("strategy,rank,label,delta_e,delta_e_display\n");
                for report in many {
                    for line in spread_csv(report, cfg.log_scale).lines().skip(1) {
                        body.push_str(&format!("{},{line}\n", report.strategy));
                    }
                }
                body
            }
        };
        emit(Some(path), &artifacts.csv(&body))?;
    }
    if let Some(path) = args.table.as_deref() {
        emit(Some(path), &artifacts.csv(&comparison.to_csv()))?;
    }
    if let Some(path) = args.trace.as_deref() {
        let best = comparison
            .campaigns
            .iter()
            .filter_map(DqesReport::best_trial)
            .min_by(|a, b| a.e_final.total_cmp(&b.e_final))
            .expect("campaigns have trials");
        emit(Some(path), &artifacts.csv(&emit_trace_csv(best)?))?;
    }
    for row in &comparison.rows {
        println!(
            "{}: {} trials, min dE {:.3e}, mean dE {:.3e}, {} within mu = {:.1e}",
            row.strategy, row.trials, row.min_delta_e, row.mean_delta_e, row.accurate_count, cfg.mu
        );
    }
    Ok(())
}

pub fn scan(args: ScanArgs) -> Result<(), Failure> {
    let cfg: ScanConfig = match &args.output.replay {
        Some(path) => load_replay(path, "scan")?,
        None => ScanConfig {
            manifest: required(args.manifest.as_deref().and_then(Path::to_str), "--manifest")?,
            solver: SolverConfig::from_args(&args.solver, args.seed.unwrap_or(0))?,
        },
    };
    let mut artifacts = Artifacts::new("scan", &cfg, vec![cfg.solver.lanczos.seed], args.output.timing);
    if let Some(r) = &args.output.replay {
        artifacts.input(r);
    }
    let manifest_path = Path::new(&cfg.manifest);
    artifacts.input(manifest_path);
    let text = fs::read_to_string(manifest_path).map_err(|e| Failure::usage(format!("{}: {e}", cfg.manifest)))?;
    let manifest = PesManifest::parse(&text, manifest_path.parent())?;
    for row in &manifest.rows {
        if resolve_named(&row.source).is_none() {
            artifacts.input(&row.source);
        }
    }
    artifacts.outputs(&[args.out.as_deref(), args.extrema.as_deref()])?;
    if manifest.rows.is_empty() {
        eprintln!("warning: manifest {} has no rows", cfg.manifest);
    }

    let result = with_pool(args.workers, || scan_manifest(&manifest, cfg.solver.solver, &cfg.solver.lanczos))?;
    artifacts.finish();
    emit(args.out.as_deref(), &artifacts.csv(&result.grid.to_csv()))?;

    let mut extrema_error = None;
    if let Some(path) = args.extrema.as_deref() {
        match grid_extrema(&result.grid) {
            Ok(extrema) => {
                let body = ExtremaReport {
                    coord_labels: &result.grid.coord_labels,
                    extrema: &extrema,
                };
                emit(Some(path), &artifacts.json(&body))?;
                for e in &extrema {
                    eprintln!("{:?} at {:?}", e.kind, e.coords);
                }
            }
            Err(e) => extrema_error = Some(e),
        }
    }
    for f in &result.failures {
        eprintln!("row {} ({}): {}", f.row, f.source, f.message);
    }
    let summary = format!(
        "{} of {} rows solved, {} failed",
        result.grid.points.len(),
        manifest.rows.len(),
        result.failures.len()
    );
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    if result.failures.iter().any(|f| f.best_estimate.is_some()) {
        return Err(Failure::NotConverged(format!(
            "{} rows did not converge",
            result.failures.iter().filter(|f| f.best_estimate.is_some()).count()
        )));
    }
    if !result.failures.is_empty() {
        return Err(Failure::usage(format!("{} rows failed", result.failures.len())));
    }
    match extrema_error {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

pub fn mubs(args: MubsArgs) -> Result<(), Failure> {
    let cfg: MubsConfig = match &args.output.replay {
        Some(path) => load_replay(path, "mubs")?,
        None => MubsConfig {
            qubits: args.qubits.ok_or_else(|| Failure::usage("--qubits is required"))?,
        },
    };
    let mut artifacts = Artifacts::new("mubs", &cfg, vec![], args.output.timing);
    if let Some(r) = &args.output.replay {
        artifacts.input(r);
    }
    artifacts.outputs(&[args.out.as_deref()])?;
    let bases = if cfg.qubits == 2 { two_qubit_mubs() } else { full_mubs(cfg.qubits)? };
    artifacts.finish();
    emit(args.out.as_deref(), &artifacts.csv(&mub_csv(&bases)))?;
    let states: usize = bases.iter().map(|b| b.states.len()).sum();
    let summary = format!("{} bases, {states} states on {} qubits", bases.len(), cfg.qubits);
    if args.out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}
