//! Experiment records: one JSON object per line on disk, so a crashed
//! run leaves every fully written record loadable, plus a CSV exporter
//! for analysis tools.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub instance: String,
    pub solver: String,
    /// Snapshot of the roster entry that produced this record.
    pub config: serde_json::Value,
    pub seed: u64,
    pub wall_ms: f64,
    pub cut_value: f64,
    pub cut_fraction: f64,
    /// Present when the instance optimum is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub approx_ratio: Option<f64>,
    /// True when the record provably attains the optimum.
    pub success: bool,
    pub timestamp_ms: u64,
    /// Best sampled cut, when the solver sampled bitstrings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_best: Option<f64>,
    /// Best sampled cut after local search.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_best_ls: Option<f64>,
}

impl ExperimentRecord {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(0.0..=1.0).contains(&self.cut_fraction) {
            return Err(CliError::Config(format!(
                "record {}:{} has cut fraction {}",
                self.instance, self.solver, self.cut_fraction
            )));
        }
        if self.success && self.approx_ratio.is_none_or(|r| (r - 1.0).abs() > 1e-12) {
            return Err(CliError::Config(format!(
                "record {}:{} marked success without ratio 1",
                self.instance, self.solver
            )));
        }
        Ok(())
    }

    pub fn now_ms() -> u64 {
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0)
    }
}

/// Appends records to `path`, one JSON object per line, creating parent
/// directories as needed.
pub fn append_records(path: &Path, records: &[ExperimentRecord]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut buf = String::new();
    for r in records {
        buf.push_str(&serde_json::to_string(r).map_err(|e| CliError::Io(e.to_string()))?);
        buf.push('\n');
    }
    file.write_all(buf.as_bytes())?;
    Ok(())
}

/// Loads every parseable line; malformed lines (for example a partial
/// tail after a crash) are counted and skipped.
pub fn load_records(path: &Path) -> Result<(Vec<ExperimentRecord>, usize), CliError> {
    let text = fs::read_to_string(path)?;
    let mut records = Vec::new();
    let mut skipped = 0;
    for line in text.lines() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<ExperimentRecord>(line) {
            Ok(r) => records.push(r),
            Err(_) => skipped += 1,
        }
    }
    Ok((records, skipped))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(
        "instance,solver,seed,wall_ms,cut_value,cut_fraction,approx_ratio,success,timestamp_ms,sampled_best,sampled_best_ls,config\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            csv_field(&r.instance),
            csv_field(&r.solver),
            r.seed,
            r.wall_ms,
            r.cut_value,
            r.cut_fraction,
            opt(r.approx_ratio),
            r.success,
            r.timestamp_ms,
            opt(r.sampled_best),
            opt(r.sampled_best_ls),
            csv_field(&r.config.to_string()),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(value: f64, fraction: f64) -> ExperimentRecord {
        ExperimentRecord {
            instance: "rr12d3-s1-i0".into(),
            solver: "bm".into(),
            config: serde_json::json!({"id": "bm"}),
            seed: 7,
            wall_ms: 1.5,
            cut_value: value,
            cut_fraction: fraction,
            approx_ratio: None,
            success: false,
            timestamp_ms: 1000,
            sampled_best: None,
            sampled_best_ls: None,
        }
    }

    #[test]
    fn ndjson_round_trip_skips_partial_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("runs/records.ndjson");
        append_records(&path, &[record(14.0, 14.0 / 18.0)]).unwrap();
        append_records(&path, &[record(15.0, 15.0 / 18.0)]).unwrap();
        // simulate a crash mid-write
        let mut f = fs::OpenOptions::new().append(true).open(&path).unwrap();
        f.write_all(b"{\"instance\": \"rr12d3-s1-i1\", \"solver").unwrap();
        drop(f);

        let (records, skipped) = load_records(&path).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(skipped, 1);
        assert_eq!(records[1].cut_value, 15.0);
    }

    #[test]
    fn validation_examples() {
        assert!(record(14.0, 0.5).validate().is_ok());
        assert!(record(14.0, 1.5).validate().is_err());
        let mut r = record(18.0, 1.0);
        r.success = true;
        assert!(r.validate().is_err(), "success without ratio must fail");
        r.approx_ratio = Some(1.0);
        assert!(r.validate().is_ok());
    }

    #[test]
    fn csv_escapes_and_orders_columns() {
        let mut r = record(14.0, 0.5);
        r.instance = "weird,\"name\"".into();
        let csv = records_to_csv(&[r]);
        let mut lines = csv.lines();
        assert!(lines.next().unwrap().starts_with("instance,solver,seed"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("\"weird,\"\"name\"\"\",bm,7,"));
        assert!(row.contains(",,"), "missing ratio column must be empty");
    }
}
