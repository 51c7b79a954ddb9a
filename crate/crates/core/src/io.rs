//! Trajectory interchange: CSV with header `t,A,B,C,D,E,max_drift,max_offdiag`
//! and a JSON document carrying run metadata.
//!
//! Floats are written in Rust's shortest round-trip form so a trajectory read
//! back is bit-identical to the one written.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{InitialData, ModelId, ModelParams};
use crate::curvature::{CurvatureError, DiagonalMetric};
use crate::flow::{FlowProblem, RhsSource, Sample, StepStats, Termination, Trajectory};

pub const CSV_HEADER: [&str; 8] = ["t", "A", "B", "C", "D", "E", "max_drift", "max_offdiag"];

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("unexpected CSV header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
    #[error(transparent)]
    Metric(#[from] CurvatureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` means JSON, anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

pub fn write_csv<W: Write>(traj: &Trajectory, out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for s in &traj.samples {
        let g = s.g.coeffs();
        let row = [s.t, g[0], g[1], g[2], g[3], g[4], s.max_drift, s.max_offdiag];
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(input: R) -> Result<Trajectory, IoError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(IoError::Header(header));
    }
    let mut samples = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals: Vec<f64> = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| IoError::Row { row: row + 1, msg: e.to_string() })?;
        if vals.len() != CSV_HEADER.len() {
            return Err(IoError::Row {
                row: row + 1,
                msg: format!("expected {} fields, found {}", CSV_HEADER.len(), vals.len()),
            });
        }
        samples.push(Sample {
            t: vals[0],
            g: DiagonalMetric::new([vals[1], vals[2], vals[3], vals[4], vals[5]])?,
            max_drift: vals[6],
            max_offdiag: vals[7],
        });
    }
    Ok(Trajectory {
        model: None,
        samples,
        termination: Termination::ReachedEnd,
        stats: StepStats::default(),
    })
}

/// Run metadata stored next to the samples in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub model: ModelId,
    pub params: ModelParams,
    pub lambda: InitialData,
    pub t_end: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub offdiag_tol: f64,
    pub rhs: RhsSource,
    pub termination: Termination,
    pub stats: StepStats,
}

impl RunMetadata {
    pub fn new(p: &FlowProblem, traj: &Trajectory) -> Self {
        Self {
            model: p.model,
            params: p.params.clone(),
            lambda: p.initial,
            t_end: p.t_end,
            rel_tol: p.rel_tol,
            abs_tol: p.abs_tol,
            offdiag_tol: p.offdiag_tol,
            rhs: p.rhs,
            termination: traj.termination,
            stats: traj.stats,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDocument {
    pub metadata: RunMetadata,
    pub columns: Vec<String>,
    pub rows: Vec<[f64; 8]>,
}

impl RunDocument {
    pub fn new(p: &FlowProblem, traj: &Trajectory) -> Self {
        Self {
            metadata: RunMetadata::new(p, traj),
            columns: CSV_HEADER.iter().map(|s| s.to_string()).collect(),
            rows: traj
                .samples
                .iter()
                .map(|s| {
                    let g = s.g.coeffs();
                    [s.t, g[0], g[1], g[2], g[3], g[4], s.max_drift, s.max_offdiag]
                })
                .collect(),
        }
    }

    pub fn trajectory(&self) -> Result<Trajectory, IoError> {
        let samples = self
            .rows
            .iter()
            .map(|r| {
                Ok(Sample {
                    t: r[0],
                    g: DiagonalMetric::new([r[1], r[2], r[3], r[4], r[5]])?,
                    max_drift: r[6],
                    max_offdiag: r[7],
                })
            })
            .collect::<Result<_, IoError>>()?;
        Ok(Trajectory {
            model: Some(self.metadata.model),
            samples,
            termination: self.metadata.termination,
            stats: self.metadata.stats,
        })
    }
}

/// Writes `traj` to `path` in the requested format.
pub fn save(path: &Path, format: Format, p: &FlowProblem, traj: &Trajectory) -> Result<(), IoError> {
    let file = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => write_csv(traj, file),
        Format::Json => {
            serde_json::to_writer_pretty(file, &RunDocument::new(p, traj))?;
            Ok(())
        }
    }
}

/// Reads a trajectory, picking the format from the file extension.
pub fn load(path: &Path) -> Result<Trajectory, IoError> {
    let file = BufReader::new(File::open(path)?);
    match Format::from_path(path) {
        Format::Csv => read_csv(file),
        Format::Json => {
            let doc: RunDocument = serde_json::from_reader(file)?;
            doc.trajectory()
        }
    }
}
