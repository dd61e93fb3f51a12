use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mubvqe::report::RunRecord;
use serde::Serialize;

use crate::Failure;

#[derive(Serialize)]
struct Document<'a, T: Serialize> {
    run_record: &'a RunRecord,
    #[serde(flatten)]
    body: &'a T,
}

/// Collects the artifacts of one invocation and writes them with a shared
/// run record. Every output path is checked against the inputs first.
pub struct Artifacts {
    record: RunRecord,
    started: Instant,
    timing: bool,
    inputs: Vec<PathBuf>,
}

impl Artifacts {
    pub fn new(subcommand: &str, config: &impl Serialize, seeds: Vec<u64>, timing: bool) -> Self {
        let config = serde_json::to_value(config).expect("configuration serializes");
        Artifacts {
            record: RunRecord::new(subcommand, config, seeds),
            started: Instant::now(),
            timing,
            inputs: Vec::new(),
        }
    }

    /// Registers a file the run reads, so no output may overwrite it.
    pub fn input(&mut self, path: impl Into<PathBuf>) {
        self.inputs.push(path.into());
    }

    /// Declares the outputs; call once before writing anything.
    pub fn outputs(&mut self, paths: &[Option<&Path>]) -> Result<(), Failure> {
        for path in paths.iter().flatten() {
            if let Some(input) = self.inputs.iter().find(|i| same_file(i, path)) {
                return Err(Failure::usage(format!(
                    "refusing to overwrite input file {}",
                    input.display()
                )));
            }
            let name = path
                .file_name()
                .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
            self.record.outputs.push(name);
        }
        Ok(())
    }

    /// Freezes the record (adding wall time when requested).
    pub fn finish(&mut self) {
        if self.timing {
            self.record.wall_time_s = Some(self.started.elapsed().as_secs_f64());
        }
    }

    pub fn json(&self, body: &impl Serialize) -> String {
        let doc = Document {
            run_record: &self.record,
            body,
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }

    pub fn csv(&self, body: &str) -> String {
        let mut text = self.record.comment_line();
        text.push_str(body);
        text
    }
}

/// Writes to `path`, or to stdout when `path` is `None`.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("{}: {e}", dir.display())))?;
            }
            fs::write(p, text).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::usage(format!("stdout: {e}")))
        }
    }
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (fs::canonicalize(a), fs::canonicalize(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}
