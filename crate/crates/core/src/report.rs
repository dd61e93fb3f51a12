//! Run records and CSV artifacts.
//!
//! CSV floats are written with 17 significant digits (`{:.16e}`) so every
//! value reparses to the same bits. JSON uses serde_json's shortest
//! round-trip formatting.

use serde::{Deserialize, Serialize};

use crate::dqes::{delta_e_spread, DqesReport};
use crate::error::{Error, Result};
use crate::mub::MubBasis;
use crate::vqe::VqeTrialResult;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to replay a run. `wall_time_s` is only present when
/// timing was requested, so default artifacts are byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub subcommand: String,
    pub tool_version: String,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    /// File names (not paths) of the artifacts written.
    pub outputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunRecord {
    pub fn new(subcommand: &str, config: serde_json::Value, seeds: Vec<u64>) -> Self {
        RunRecord {
            subcommand: subcommand.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            config,
            seeds,
            outputs: Vec::new(),
            wall_time_s: None,
        }
    }

    /// Single-line form for CSV comment headers.
    pub fn comment_line(&self) -> String {
        format!("# run_record: {}\n", serde_json::to_string(self).expect("record serializes"))
    }
}

/// `iteration,energy` rows followed by a `best` row with the best-so-far energy.
pub fn emit_trace_csv(result: &VqeTrialResult) -> Result<String> {
    if result.trace.is_empty() {
        return Err(Error::InvalidArgument(format!("trial '{}' has an empty trace", result.label)));
    }
    let mut out = String::from("iteration,energy\n");
    for (i, e) in result.trace.iter().enumerate() {
        out.push_str(&format!("{i},{e:.16e}\n"));
    }
    out.push_str(&format!("best,{:.16e}\n", result.e_final));
    Ok(out)
}

/// Sorted per-trial ΔE; `delta_e_display` is clamped to 1e-16 when `log_scale`.
pub fn spread_csv(report: &DqesReport, log_scale: bool) -> String {
    let mut out = String::from("rank,label,delta_e,delta_e_display\n");
    for (rank, row) in delta_e_spread(report, log_scale).iter().enumerate() {
        out.push_str(&format!(
            "{rank},{},{:.16e},{:.16e}\n",
            csv_field(&row.label),
            row.delta_e,
            row.display
        ));
    }
    out
}

/// `basis,state,index,re,im` rows for every amplitude.
pub fn mub_csv(bases: &[MubBasis]) -> String {
    let mut out = String::from("basis,state,index,re,im\n");
    for b in bases {
        for (s, state) in b.states.iter().enumerate() {
            for (idx, a) in state.amplitudes().iter().enumerate() {
                out.push_str(&format!("{},{s},{idx},{:.16e},{:.16e}\n", b.label, a.re, a.im));
            }
        }
    }
    out
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
