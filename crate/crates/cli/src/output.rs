//! Result files: CSV table, JSON mirror, rejection traces.
//!
//! CSV columns:
//!
//! ```text
//! instance_id,algorithm,T,runs,errors,e_hat,log_e_hat,ci_lo,ci_hi,seed
//! ```
//!
//! Floats use the shortest decimal that round-trips; a zero-error cell has
//! `log_e_hat = -inf`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use conbandit::algorithms::PhaseRecord;
use conbandit::{Algorithm, ErrorEstimate, SweepResult};
use serde_json::{json, Value};
use thiserror::Error;

use crate::config::{ExperimentConfig, InstanceDesc};

pub const CSV_HEADER: &str = "instance_id,algorithm,T,runs,errors,e_hat,log_e_hat,ci_lo,ci_hi,seed";

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct CsvError {
    pub line: usize,
    pub message: String,
}

pub fn csv_row(e: &ErrorEstimate) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        e.instance_id,
        e.algorithm.id(),
        e.horizon,
        e.runs,
        e.errors,
        e.e_hat,
        e.log_e_hat,
        e.ci_lo,
        e.ci_hi,
        e.seed
    )
}

pub fn to_csv(estimates: &[ErrorEstimate]) -> String {
    let mut out = String::with_capacity(64 * (estimates.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for e in estimates {
        out.push_str(&csv_row(e));
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<ErrorEstimate>, CsvError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(CsvError {
                line: 1,
                message: format!("expected header `{CSV_HEADER}`"),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        let err = |message: String| CsvError { line: line_no, message };
        let cols: Vec<&str> = line.trim_end().split(',').collect();
        if cols.len() != 10 {
            return Err(err(format!("expected 10 columns, found {}", cols.len())));
        }
        let int = |i: usize| {
            cols[i]
                .parse::<u64>()
                .map_err(|e| err(format!("column {}: {e}", i + 1)))
        };
        let float = |i: usize| {
            cols[i]
                .parse::<f64>()
                .map_err(|e| err(format!("column {}: {e}", i + 1)))
        };
        let algorithm: Algorithm = cols[1].parse().map_err(|e: conbandit::Error| err(e.to_string()))?;
        rows.push(ErrorEstimate {
            instance_id: cols[0].to_string(),
            algorithm,
            horizon: int(2)?,
            runs: int(3)?,
            errors: int(4)?,
            e_hat: float(5)?,
            log_e_hat: float(6)?,
            ci_lo: float(7)?,
            ci_hi: float(8)?,
            seed: int(9)?,
        });
    }
    Ok(rows)
}

fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

/// JSON mirror of the CSV plus run metadata. Non-finite floats are written
/// as strings (`"-inf"`, `"inf"`).
pub fn to_json(config: &ExperimentConfig, result: &SweepResult) -> Value {
    let desc = InstanceDesc::from_instance(&config.instance_id, &config.instance);
    let estimates: Vec<Value> = result
        .estimates
        .iter()
        .map(|e| {
            json!({
                "instance_id": e.instance_id,
                "algorithm": e.algorithm.id(),
                "T": e.horizon,
                "runs": e.runs,
                "errors": e.errors,
                "e_hat": number(e.e_hat),
                "log_e_hat": number(e.log_e_hat),
                "ci_lo": number(e.ci_lo),
                "ci_hi": number(e.ci_hi),
                "seed": e.seed,
            })
        })
        .collect();
    json!({
        "metadata": {
            "instance_id": config.instance_id,
            "instance": {
                "tau": desc.tau,
                "means": desc.means,
                "covariance": desc.covariance,
                "covariances": desc.covariances,
                "a1": desc.a1,
                "a2": desc.a2,
            },
            "algorithms": config.algorithms.iter().map(|a| a.id()).collect::<Vec<_>>(),
            "horizons": config.horizons,
            "runs": config.runs,
            "base_seed": result.base_seed,
            "threads": result.threads,
            "sampling": result.sampling,
            "wall_clock_secs": result.wall_clock_secs,
        },
        "estimates": estimates,
    })
}

/// One line per rejection, arms numbered from 1.
pub fn trace_lines(algorithm: Algorithm, horizon: u64, records: &[PhaseRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let gaps: Vec<String> = r.gaps.iter().map(|(i, g)| format!("{}:{}", i + 1, g)).collect();
        let _ = writeln!(
            out,
            "algorithm={} T={} phase={} rejected={} apparent_optimal={} gaps=[{}]",
            algorithm.id(),
            horizon,
            r.phase,
            r.rejected + 1,
            r.apparent_optimal + 1,
            gaps.join(",")
        );
    }
    out
}

/// Writes `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> std::io::Result<()> {
    let mut tmp_name = path.file_name().unwrap_or_default().to_os_string();
    tmp_name.push(".partial");
    let tmp = path.with_file_name(tmp_name);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
