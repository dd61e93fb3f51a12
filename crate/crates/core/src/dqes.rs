//! Campaigns: one VQE trial per initial state of a strategy, plus aggregates.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::with_pool;
use crate::exact::{ground_energy, LanczosConfig, SolverChoice, SolverMethod};
use crate::mub::{
    full_dqes_states, mub_pairs_random_rest, partial_dqes_count, partial_dqes_states, random_basis_states,
    zero_state_set, InitialStateSet,
};
use crate::optim::OptimizerConfig;
use crate::pauli::QubitHamiltonian;
use crate::rng::{derive_seed, rng_from_seed};
use crate::statevector::Circuit;
use crate::vqe::{run_vqe, EstimatorConfig, TrialSetup, VqeTrialResult};

/// Chemical accuracy in Hartree.
pub const CHEMICAL_ACCURACY: f64 = 1.4e-3;

/// Sub-stream used for drawing initial states, kept apart from trial streams.
const STATE_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// `|0...0>` once, θ0 = 0.
    Zero,
    /// `|0...0>` with random θ0 per trial.
    RandomParams,
    /// Random computational basis state and random θ0 per trial.
    RandomBasis,
    /// Pair-embedded 2-qubit MUB states, θ0 = 0.
    MubPairs,
    /// Pair-embedded MUB states with random classical rest, θ0 = 0.
    MubPairsRandomRest,
    /// Every state of the full MUB set, θ0 = 0.
    MubFull,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Zero,
        Strategy::RandomParams,
        Strategy::RandomBasis,
        Strategy::MubPairs,
        Strategy::MubPairsRandomRest,
        Strategy::MubFull,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Zero => "zero",
            Strategy::RandomParams => "random-params",
            Strategy::RandomBasis => "random-basis",
            Strategy::MubPairs => "mub-pairs",
            Strategy::MubPairsRandomRest => "mub-pairs-random-rest",
            Strategy::MubFull => "mub-full",
        }
    }

    /// Random strategies draw θ0 per trial and take a trial count.
    pub fn is_random(self) -> bool {
        matches!(self, Strategy::RandomParams | Strategy::RandomBasis)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown strategy '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum TrialCount {
    /// Same number of trials as the partial MUB set (full set for one qubit).
    #[default]
    MatchMub,
    Fixed(usize),
}

/// Size of the MUB start set a random campaign is matched against.
pub fn mub_trial_count(n: usize) -> usize {
    if n >= 2 {
        partial_dqes_count(n)
    } else {
        (1 << n) * ((1 << n) + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CampaignConfig {
    pub strategy: Strategy,
    pub trials: TrialCount,
    pub seed: u64,
    pub estimator: EstimatorConfig,
    pub optimizer: OptimizerConfig,
    pub mu: f64,
    /// Worker threads; 0 means rayon's default.
    pub workers: usize,
    /// Known ground energy; computed with `solver` when absent.
    pub e0: Option<f64>,
    pub solver: SolverChoice,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            strategy: Strategy::MubPairs,
            trials: TrialCount::MatchMub,
            seed: 0,
            estimator: EstimatorConfig::exact(),
            optimizer: OptimizerConfig::default(),
            mu: CHEMICAL_ACCURACY,
            workers: 0,
            e0: None,
            solver: SolverChoice::Auto,
        }
    }
}

impl CampaignConfig {
    pub fn with_strategy(strategy: Strategy) -> Self {
        CampaignConfig {
            strategy,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DqesReport {
    pub strategy: Strategy,
    pub n_qubits: usize,
    pub n_params: usize,
    pub e0: f64,
    pub e0_method: Option<SolverMethod>,
    pub mu: f64,
    pub mean_delta_e: f64,
    pub min_delta_e: f64,
    pub accurate_count: usize,
    pub accurate_labels: Vec<String>,
    /// Lowest energy of any cost evaluation across all trials.
    pub min_evaluated: f64,
    pub trials: Vec<VqeTrialResult>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl DqesReport {
    pub fn best_trial(&self) -> Option<&VqeTrialResult> {
        self.trials
            .iter()
            .min_by(|a, b| a.e_final.total_cmp(&b.e_final))
    }
}

/// Initial states a strategy uses on `n` qubits.
pub fn strategy_states(strategy: Strategy, n: usize, trials: TrialCount, seed: u64) -> Result<InitialStateSet> {
    let count = match trials {
        TrialCount::MatchMub => mub_trial_count(n),
        TrialCount::Fixed(k) if k >= 1 => k,
        TrialCount::Fixed(_) => return Err(Error::InvalidArgument("trial count must be at least 1".into())),
    };
    let state_seed = derive_seed(seed, STATE_STREAM);
    match strategy {
        Strategy::Zero => zero_state_set(n),
        Strategy::RandomParams => {
            let zero = zero_state_set(n)?.entries.remove(0);
            let entries = (0..count)
                .map(|k| crate::mub::InitialState {
                    label: format!("params{k}"),
                    state: zero.state.clone(),
                })
                .collect();
            Ok(InitialStateSet { n_qubits: n, entries })
        }
        Strategy::RandomBasis => random_basis_states(n, count, state_seed),
        Strategy::MubPairs => partial_dqes_states(n),
        Strategy::MubPairsRandomRest => mub_pairs_random_rest(n, state_seed),
        Strategy::MubFull => full_dqes_states(n),
    }
}

/// θ0 drawn uniformly from [-π, π) per component.
pub fn random_theta(n_params: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n_params).map(|_| rng.random_range(-PI..PI)).collect()
}

fn resolve_e0(h: &QubitHamiltonian, cfg: &CampaignConfig) -> Result<(f64, Option<SolverMethod>)> {
    match cfg.e0 {
        Some(e0) => Ok((e0, None)),
        None => {
            let lanczos = LanczosConfig {
                seed: cfg.seed,
                ..Default::default()
            };
            let sol = ground_energy(h, cfg.solver, &lanczos)?;
            Ok((sol.e0, Some(sol.method)))
        }
    }
}

/// Runs one VQE trial per initial state of `cfg.strategy`. Trials run on a
/// worker pool and are gathered in trial order.
pub fn run_campaign(h: &QubitHamiltonian, circuit: &Circuit, cfg: &CampaignConfig) -> Result<DqesReport> {
    if !(cfg.mu > 0.0) {
        return Err(Error::InvalidArgument("chemical-accuracy threshold must be positive".into()));
    }
    if circuit.n_qubits() != h.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.n_qubits(),
            found: circuit.n_qubits(),
        });
    }
    cfg.optimizer.validate()?;
    let started = Instant::now();
    let n = h.n_qubits();
    let states = strategy_states(cfg.strategy, n, cfg.trials, cfg.seed)?;
    let (e0, e0_method) = resolve_e0(h, cfg)?;
    let n_params = circuit.n_params();

    let trials: Vec<VqeTrialResult> = with_pool(cfg.workers, || {
        states
            .entries
            .par_iter()
            .enumerate()
            .map(|(k, entry)| {
                let trial_seed = derive_seed(cfg.seed, k as u64);
                let theta0 = if cfg.strategy.is_random() {
                    random_theta(n_params, trial_seed)
                } else {
                    vec![0.0; n_params]
                };
                let estimator = EstimatorConfig {
                    seed: derive_seed(trial_seed, 1),
                    ..cfg.estimator
                };
                run_vqe(
                    h,
                    circuit,
                    TrialSetup {
                        label: entry.label.clone(),
                        initial: &entry.state,
                        theta0,
                        seed: trial_seed,
                        e0: Some(e0),
                    },
                    &estimator,
                    &cfg.optimizer,
                )
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let deltas: Vec<f64> = trials.iter().map(|t| t.e_final - e0).collect();
    let mean_delta_e = deltas.iter().sum::<f64>() / deltas.len() as f64;
    let min_delta_e = deltas.iter().copied().fold(f64::INFINITY, f64::min);
    let accurate_labels: Vec<String> = trials
        .iter()
        .zip(&deltas)
        .filter(|(_, &d)| d < cfg.mu)
        .map(|(t, _)| t.label.clone())
        .collect();
    let min_evaluated = trials.iter().map(|t| t.min_evaluated).fold(f64::INFINITY, f64::min);
    Ok(DqesReport {
        strategy: cfg.strategy,
        n_qubits: n,
        n_params,
        e0,
        e0_method,
        mu: cfg.mu,
        mean_delta_e,
        min_delta_e,
        accurate_count: accurate_labels.len(),
        accurate_labels,
        min_evaluated,
        trials,
        wall_time: started.elapsed(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub strategy: Strategy,
    pub trials: usize,
    pub mean_delta_e: f64,
    pub min_delta_e: f64,
    pub accurate_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub e0: f64,
    pub rows: Vec<ComparisonRow>,
    pub campaigns: Vec<DqesReport>,
}

impl Comparison {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("strategy,trials,mean_delta_e,min_delta_e,accurate_count\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{:.16e},{:.16e},{}\n",
                r.strategy, r.trials, r.mean_delta_e, r.min_delta_e, r.accurate_count
            ));
        }
        out
    }

    pub fn rows_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

/// Runs each configuration against the same Hamiltonian and ansatz. The
/// ground energy is resolved once (from the first configuration) and shared.
pub fn compare_strategies(h: &QubitHamiltonian, circuit: &Circuit, cfgs: &[CampaignConfig]) -> Result<Comparison> {
    let first = cfgs
        .first()
        .ok_or_else(|| Error::InvalidArgument("at least one campaign configuration is required".into()))?;
    let (e0, method) = resolve_e0(h, first)?;
    let mut campaigns = Vec::with_capacity(cfgs.len());
    for cfg in cfgs {
        let cfg = CampaignConfig {
            e0: Some(cfg.e0.unwrap_or(e0)),
            ..cfg.clone()
        };
        let mut report = run_campaign(h, circuit, &cfg)?;
        if first.e0.is_none() {
            report.e0_method = method;
        }
        campaigns.push(report);
    }
    let rows = campaigns
        .iter()
        .map(|r| ComparisonRow {
            strategy: r.strategy,
            trials: r.trials.len(),
            mean_delta_e: r.mean_delta_e,
            min_delta_e: r.min_delta_e,
            accurate_count: r.accurate_count,
        })
        .collect();
    Ok(Comparison { e0, rows, campaigns })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpreadRow {
    pub label: String,
    pub delta_e: f64,
    /// `delta_e` clamped to 1e-16 from below, for log-scale display.
    pub display: f64,
}

/// Per-trial ΔE sorted ascending (ties keep trial order).
pub fn delta_e_spread(report: &DqesReport, log_scale: bool) -> Vec<SpreadRow> {
    let mut rows: Vec<SpreadRow> = report
        .trials
        .iter()
        .map(|t| {
            let d = t.e_final - report.e0;
            SpreadRow {
                label: t.label.clone(),
                delta_e: d,
                display: if log_scale { d.max(1e-16) } else { d },
            }
        })
        .collect();
    rows.sort_by(|a, b| a.delta_e.total_cmp(&b.delta_e));
    rows
}
