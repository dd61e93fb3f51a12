//! Potential-energy-surface scans over a manifest of per-point Hamiltonians.

use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{ground_energy, LanczosConfig, SolverChoice, SolverMethod};
use crate::problems::{load_hamiltonian, resolve_named};

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestRow {
    pub coords: Vec<f64>,
    /// Built-in name, synthetic spec, or file path (resolved against the manifest directory).
    pub source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PesManifest {
    pub coord_labels: Vec<String>,
    pub rows: Vec<ManifestRow>,
}

impl PesManifest {
    pub fn new(coord_labels: Vec<String>, rows: Vec<ManifestRow>) -> Result<Self> {
        let arity = coord_labels.len();
        let mut seen = HashSet::new();
        for (idx, row) in rows.iter().enumerate() {
            if row.coords.len() != arity {
                return Err(Error::Parse {
                    line: idx + 2,
                    message: format!("expected {arity} coordinates, found {}", row.coords.len()),
                });
            }
            let key: Vec<u64> = row.coords.iter().map(|c| c.to_bits()).collect();
            if !seen.insert(key) {
                return Err(Error::Parse {
                    line: idx + 2,
                    message: format!("duplicate coordinates {:?}", row.coords),
                });
            }
        }
        Ok(PesManifest { coord_labels, rows })
    }

    /// Parses `coords...,path` CSV. Relative paths are joined onto `base_dir`.
    pub fn parse(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let header = reader
            .headers()
            .map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
            .clone();
        if header.is_empty() || header.get(header.len() - 1) != Some("path") {
            return Err(Error::Parse {
                line: 1,
                message: "header must be `coords...,path`".into(),
            });
        }
        let coord_labels: Vec<String> = header.iter().take(header.len() - 1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (idx, record) in reader.records().enumerate() {
            let line = record.as_ref().ok().and_then(|r| r.position()).map_or(idx + 2, |p| p.line() as usize);
            let record = record.map_err(|e| Error::Parse { line, message: e.to_string() })?;
            let fields: Vec<&str> = record.iter().collect();
            let (path, coords) = fields.split_last().ok_or(Error::Parse {
                line,
                message: "empty row".into(),
            })?;
            let coords = coords
                .iter()
                .map(|c| {
                    c.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("bad coordinate '{c}'"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let source = match base_dir {
                Some(dir) if resolve_named(path).is_none() && Path::new(path).is_relative() => {
                    dir.join(path).to_string_lossy().into_owned()
                }
                _ => path.to_string(),
            };
            rows.push(ManifestRow { coords, source });
        }
        PesManifest::new(coord_labels, rows)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PesPoint {
    pub row: usize,
    pub coords: Vec<f64>,
    pub e0: f64,
    pub method: SolverMethod,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PesGrid {
    pub coord_labels: Vec<String>,
    pub points: Vec<PesPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowFailure {
    pub row: usize,
    pub source: String,
    pub message: String,
    /// Lanczos best estimate when the failure was non-convergence.
    pub best_estimate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub grid: PesGrid,
    pub failures: Vec<RowFailure>,
}

impl PesGrid {
    /// `coords...,E0` with full precision.
    pub fn to_csv(&self) -> String {
        let mut out = self.coord_labels.join(",");
        if !self.coord_labels.is_empty() {
            out.push(',');
        }
        out.push_str("E0\n");
        for p in &self.points {
            for c in &p.coords {
                out.push_str(&format!("{c},"));
            }
            out.push_str(&format!("{:.16e}\n", p.e0));
        }
        out
    }

    /// Sorted axis values when the points form a full rectangular 2-D grid.
    pub fn shape(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.coord_labels.len() != 2 || self.points.is_empty() {
            return None;
        }
        let xs: BTreeSet<u64> = self.points.iter().map(|p| ordered_bits(p.coords[0])).collect();
        let ys: BTreeSet<u64> = self.points.iter().map(|p| ordered_bits(p.coords[1])).collect();
        if xs.len() * ys.len() != self.points.len() {
            return None;
        }
        let unbits = |s: BTreeSet<u64>| s.into_iter().map(from_ordered_bits).collect::<Vec<f64>>();
        Some((unbits(xs), unbits(ys)))
    }
}

/// Maps f64 to u64 preserving numeric order.
fn ordered_bits(x: f64) -> u64 {
    let b = x.to_bits();
    if b >> 63 == 1 {
        !b
    } else {
        b | (1 << 63)
    }
}

fn from_ordered_bits(b: u64) -> f64 {
    if b >> 63 == 1 {
        f64::from_bits(b & !(1 << 63))
    } else {
        f64::from_bits(!b)
    }
}

/// Ground energy for every manifest row, in manifest order. Rows that fail
/// to load or solve are collected in `failures` and the scan continues.
pub fn scan(manifest: &PesManifest, solver: SolverChoice, lanczos: &LanczosConfig) -> ScanResult {
    let outcomes: Vec<std::result::Result<PesPoint, RowFailure>> = manifest
        .rows
        .par_iter()
        .enumerate()
        .map(|(row, entry)| {
            let fail = |e: Error| RowFailure {
                row,
                source: entry.source.clone(),
                best_estimate: match e {
                    Error::NotConverged { best_estimate, .. } => Some(best_estimate),
                    _ => None,
                },
                message: e.to_string(),
            };
            let h = load_hamiltonian(&entry.source).map_err(fail)?;
            let sol = ground_energy(&h, solver, lanczos).map_err(fail)?;
            Ok(PesPoint {
                row,
                coords: entry.coords.clone(),
                e0: sol.e0,
                method: sol.method,
            })
        })
        .collect();
    let mut points = Vec::new();
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            Ok(p) => points.push(p),
            Err(f) => failures.push(f),
        }
    }
    ScanResult {
        grid: PesGrid {
            coord_labels: manifest.coord_labels.clone(),
            points,
        },
        failures,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
    Saddle,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub coords: Vec<f64>,
    pub kind: ExtremumKind,
}

/// Classifies interior points of a rectangular grid against their
/// 4-neighborhood. Any tie disqualifies a point.
pub fn grid_extrema(grid: &PesGrid) -> Result<Vec<Extremum>> {
    let (xs, ys) = grid
        .shape()
        .ok_or_else(|| Error::InvalidArgument("extrema need a full rectangular 2-D grid".into()))?;
    let (nx, ny) = (xs.len(), ys.len());
    if nx < 3 || ny < 3 {
        return Err(Error::InvalidArgument(format!("grid {nx}x{ny} is smaller than 3x3")));
    }
    let mut z = vec![f64::NAN; nx * ny];
    for p in &grid.points {
        let i = xs.binary_search_by(|v| v.total_cmp(&p.coords[0])).expect("x on grid");
        let j = ys.binary_search_by(|v| v.total_cmp(&p.coords[1])).expect("y on grid");
        z[i * ny + j] = p.e0;
    }
    let at = |i: usize, j: usize| z[i * ny + j];
    let mut out = Vec::new();
    for i in 1..nx - 1 {
        for j in 1..ny - 1 {
            let c = at(i, j);
            let x_pair = [at(i - 1, j), at(i + 1, j)];
            let y_pair = [at(i, j - 1), at(i, j + 1)];
            let below = |pair: &[f64; 2]| pair.iter().all(|&n| c < n);
            let above = |pair: &[f64; 2]| pair.iter().all(|&n| c > n);
            let kind = if below(&x_pair) && below(&y_pair) {
                Some(ExtremumKind::Minimum)
            } else if above(&x_pair) && above(&y_pair) {
                Some(ExtremumKind::Maximum)
            } else if (below(&x_pair) && above(&y_pair)) || (above(&x_pair) && below(&y_pair)) {
                Some(ExtremumKind::Saddle)
            } else {
                None
            };
            if let Some(kind) = kind {
                out.push(Extremum {
                    coords: vec![xs[i], ys[j]],
                    kind,
                });
            }
        }
    }
    Ok(out)
}
