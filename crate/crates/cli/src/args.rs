use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "mubvqe", version, about = "Statevector VQE with MUB-based restarts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact ground energy of a Hamiltonian.
    Diag(DiagArgs),
    /// A single VQE trial.
    Vqe(VqeArgs),
    /// A DQES campaign, or a comparison of several start strategies.
    Dqes(DqesArgs),
    /// Ground energies over a PES manifest.
    Scan(ScanArgs),
    /// Amplitude tables of the mutually unbiased bases on n qubits.
    Mubs(MubsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Record wall time in the run record (artifacts are then no longer byte-reproducible).
    #[arg(long)]
    pub timing: bool,

    /// Rerun using the configuration embedded in an earlier JSON report.
    #[arg(long, value_name = "REPORT")]
    pub replay: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    /// auto, dense or lanczos.
    #[arg(long)]
    pub solver: Option<String>,

    /// Krylov dimension per Lanczos cycle.
    #[arg(long)]
    pub max_krylov: Option<usize>,

    /// Lanczos residual tolerance, relative to max(1, |E0|).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DiagArgs {
    /// Built-in name (h2o-2q, hcooh-2q), synthetic spec, or Hamiltonian file.
    #[arg(long)]
    pub hamiltonian: Option<String>,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[arg(long)]
    pub seed: Option<u64>,

    /// JSON report path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct OptimizerArgs {
    /// efficient-su2, uccsd2, or file:<path>.
    #[arg(long)]
    pub ansatz: Option<String>,

    /// EfficientSU2 repetitions.
    #[arg(long)]
    pub reps: Option<usize>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long)]
    pub max_iter: Option<usize>,

    /// adam or nelder-mead.
    #[arg(long)]
    pub optimizer: Option<String>,

    /// Adam step size.
    #[arg(long)]
    pub step_size: Option<f64>,

    /// Shots per Pauli term; exact expectation values when absent.
    #[arg(long)]
    pub shots: Option<u64>,

    /// Known ground energy; computed exactly when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub e0: Option<f64>,

    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VqeArgs {
    #[arg(long)]
    pub hamiltonian: Option<String>,

    #[command(flatten)]
    pub opt: OptimizerArgs,

    /// Computational basis state to start from.
    #[arg(long)]
    pub basis_state: Option<usize>,

    /// Draw θ0 uniformly in [-π, π) instead of starting at zero.
    #[arg(long)]
    pub random_theta: bool,

    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Energy trace CSV path.
    #[arg(long)]
    pub trace: Option<PathBuf>,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct DqesArgs {
    #[arg(long)]
    pub hamiltonian: Option<String>,

    #[command(flatten)]
    pub opt: OptimizerArgs,

    /// Start strategy, or a comma-separated list to compare:
    /// zero, random-params, random-basis, mub-pairs, mub-pairs-random-rest, mub-full.
    #[arg(long)]
    pub init: Option<String>,

    /// Trials for random strategies: a count or match-mub.
    #[arg(long)]
    pub trials: Option<String>,

    /// Accuracy threshold in Hartree.
    #[arg(long)]
    pub mu: Option<f64>,

    /// Worker threads; 0 uses one per core.
    #[arg(long, env = "MUBVQE_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// ΔE spread CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,

    /// Clamp the displayed ΔE to 1e-16 for log-scale plots.
    #[arg(long)]
    pub log_scale: bool,

    /// Strategy comparison table CSV path.
    #[arg(long)]
    pub table: Option<PathBuf>,

    /// Energy trace CSV of the best trial.
    #[arg(long)]
    pub trace: Option<PathBuf>,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    /// CSV with header `coords...,path`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,

    #[command(flatten)]
    pub solver: SolverArgs,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, env = "MUBVQE_WORKERS", default_value_t = 0)]
    pub workers: usize,

    /// Grid CSV path (`coords...,E0`); printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// JSON path for interior minima, maxima and saddles of a 2-D grid.
    #[arg(long)]
    pub extrema: Option<PathBuf>,

    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct MubsArgs {
    #[arg(long)]
    pub qubits: Option<usize>,

    /// CSV path; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[command(flatten)]
    pub output: Output,
}
