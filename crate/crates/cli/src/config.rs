//! Resolved configurations. These are what a run record stores, with every
//! default filled in, so a replay does not depend on the flags or defaults of
//! the invoking command line. Output paths and the worker count are not part
//! of the configuration: they do not affect results.

use std::fs;
use std::path::Path;

use mubvqe::ansatz::{build_efficient_su2, build_uccsd_2q, parse_ansatz_file};
use mubvqe::dqes::{Strategy, TrialCount, CHEMICAL_ACCURACY};
use mubvqe::exact::{LanczosConfig, SolverChoice};
use mubvqe::optim::{OptimizerConfig, OptimizerMethod};
use mubvqe::report::RunRecord;
use mubvqe::vqe::EstimatorConfig;
use mubvqe::Circuit;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::args::{OptimizerArgs, SolverArgs};
use crate::Failure;

pub const DEFAULT_ANSATZ: &str = "efficient-su2";
pub const DEFAULT_REPS: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub solver: SolverChoice,
    pub lanczos: LanczosConfig,
}

impl SolverConfig {
    pub fn from_args(args: &SolverArgs, seed: u64) -> Result<Self, Failure> {
        let solver = match args.solver.as_deref().unwrap_or("auto") {
            "auto" => SolverChoice::Auto,
            "dense" => SolverChoice::Dense,
            "lanczos" => SolverChoice::Lanczos,
            other => return Err(Failure::usage(format!("unknown solver '{other}' (auto, dense, lanczos)"))),
        };
        let defaults = LanczosConfig::default();
        let lanczos = LanczosConfig {
            max_krylov: args.max_krylov.unwrap_or(defaults.max_krylov),
            tol: args.tol.unwrap_or(defaults.tol),
            seed,
            max_restarts: defaults.max_restarts,
        };
        Ok(SolverConfig { solver, lanczos })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagConfig {
    pub hamiltonian: String,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub hamiltonian: String,
    pub ansatz: String,
    pub reps: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub estimator: EstimatorConfig,
    pub e0: Option<f64>,
    pub solver: SolverConfig,
}

impl TrialConfig {
    pub fn from_args(hamiltonian: Option<&str>, args: &OptimizerArgs) -> Result<Self, Failure> {
        let hamiltonian = required(hamiltonian, "--hamiltonian")?;
        let seed = args.seed.unwrap_or(0);
        let defaults = OptimizerConfig::default();
        let method = match args.optimizer.as_deref().unwrap_or("adam") {
            "adam" | "gradient-descent-adam" => OptimizerMethod::GradientDescentAdam,
            "nelder-mead" => OptimizerMethod::NelderMead,
            other => return Err(Failure::usage(format!("unknown optimizer '{other}' (adam, nelder-mead)"))),
        };
        let optimizer = OptimizerConfig {
            method,
            max_iterations: args.max_iter.unwrap_or(defaults.max_iterations),
            step_size: args.step_size.unwrap_or(defaults.step_size),
            ..defaults
        };
        let estimator = match args.shots {
            Some(shots) => EstimatorConfig::shots(shots, seed),
            None => EstimatorConfig::exact(),
        };
        Ok(TrialConfig {
            hamiltonian,
            ansatz: args.ansatz.clone().unwrap_or_else(|| DEFAULT_ANSATZ.to_string()),
            reps: args.reps.unwrap_or(DEFAULT_REPS),
            seed,
            optimizer,
            estimator,
            e0: args.e0,
            solver: SolverConfig::from_args(&args.solver, seed)?,
        })
    }

    pub fn circuit(&self, n_qubits: usize) -> Result<Circuit, Failure> {
        build_ansatz(&self.ansatz, self.reps, n_qubits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqeConfig {
    pub trial: TrialConfig,
    pub basis_state: usize,
    pub random_theta: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DqesConfig {
    pub trial: TrialConfig,
    pub strategies: Vec<Strategy>,
    pub trials: TrialCount,
    pub mu: f64,
    pub log_scale: bool,
}

impl DqesConfig {
    pub fn parse_strategies(text: Option<&str>) -> Result<Vec<Strategy>, Failure> {
        let text = text.unwrap_or("mub-pairs");
        let strategies = text
            .split(',')
            .map(|s| s.trim().parse::<Strategy>().map_err(Failure::from))
            .collect::<Result<Vec<_>, _>>()?;
        if strategies.is_empty() {
            return Err(Failure::usage("--init needs at least one strategy"));
        }
        Ok(strategies)
    }

    pub fn parse_trials(text: Option<&str>) -> Result<TrialCount, Failure> {
        match text.unwrap_or("match-mub") {
            "match-mub" => Ok(TrialCount::MatchMub),
            n => match n.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(TrialCount::Fixed(k)),
                _ => Err(Failure::usage(format!("--trials expects a positive count or match-mub, got '{n}'"))),
            },
        }
    }

    pub fn default_mu() -> f64 {
        CHEMICAL_ACCURACY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanConfig {
    pub manifest: String,
    pub solver: SolverConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MubsConfig {
    pub qubits: usize,
}

pub fn required(value: Option<&str>, flag: &str) -> Result<String, Failure> {
    value
        .map(str::to_string)
        .ok_or_else(|| Failure::usage(format!("{flag} is required")))
}

pub fn build_ansatz(spec: &str, reps: usize, n_qubits: usize) -> Result<Circuit, Failure> {
    let circuit = match spec {
        "efficient-su2" => build_efficient_su2(n_qubits, reps)?,
        "uccsd2" => build_uccsd_2q(),
        other => match other.strip_prefix("file:") {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))?;
                parse_ansatz_file(&text)?
            }
            None => return Err(Failure::usage(format!("unknown ansatz '{other}' (efficient-su2, uccsd2, file:<path>)"))),
        },
    };
    if circuit.n_qubits() != n_qubits {
        return Err(Failure::usage(format!(
            "ansatz '{spec}' acts on {} qubits but the Hamiltonian has {n_qubits}",
            circuit.n_qubits()
        )));
    }
    Ok(circuit)
}

/// Configuration stored in the run record of an earlier report.
pub fn load_replay<T: DeserializeOwned>(path: &Path, subcommand: &str) -> Result<T, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    let record: RunRecord = serde_json::from_value(value.get("run_record").cloned().unwrap_or_default())
        .map_err(|e| Failure::usage(format!("{}: no usable run_record ({e})", path.display())))?;
    if record.subcommand != subcommand {
        return Err(Failure::usage(format!(
            "{} was produced by `{}`, not `{subcommand}`",
            path.display(),
            record.subcommand
        )));
    }
    if record.tool_version != mubvqe::report::TOOL_VERSION {
        eprintln!(
            "warning: replaying a record from version {} with version {}",
            record.tool_version,
            mubvqe::report::TOOL_VERSION
        );
    }
    serde_json::from_value(record.config).map_err(|e| Failure::usage(format!("{}: bad config ({e})", path.display())))
}
