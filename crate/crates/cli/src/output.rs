//! CSV tables and the JSON-lines run summary.
//!
//! Floats are written with 17 significant digits (`{:.16e}`), so a table
//! read back by any IEEE-754 parser reproduces the computed values exactly.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::config::ExperimentConfig;
use crate::experiments::Outcome;
use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:.16e}"),
            Cell::Bool(v) => v.to_string(),
        }
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::output::Cell::from($x)),*] };
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Appended to the run name; empty for the main table.
    pub suffix: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(suffix: &'static str, columns: &[&'static str]) -> Self {
        Table { suffix, columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }
}

fn metric(v: f64) -> Value {
    // JSON has no NaN/inf; keep them visible as strings
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or_else(|| Value::String(v.to_string()))
}

/// File name → contents for every output of the run, summary last.
pub fn render(cfg: &ExperimentConfig, outcome: &Outcome) -> Result<Vec<(String, Vec<u8>)>, CliError> {
    let mut files = Vec::with_capacity(outcome.tables.len() + 1);
    for t in &outcome.tables {
        files.push((format!("{}{}.csv", cfg.name, t.suffix), t.to_csv()?));
    }
    let checks: Map<String, Value> = outcome.checks.iter().map(|(k, v)| (k.clone(), Value::Bool(*v))).collect();
    let metrics: Map<String, Value> = outcome.metrics.iter().map(|(k, v)| (k.clone(), metric(*v))).collect();
    let config: Map<String, Value> = cfg.echo.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let names: Vec<&String> = files.iter().map(|(n, _)| n).collect();
    let summary = json!({
        "name": cfg.name,
        "kind": cfg.kind.as_str(),
        "seed": cfg.seed,
        "all-pass": outcome.all_pass(),
        "checks": checks,
        "metrics": metrics,
        "config": config,
        "files": names,
    });
    let mut line = serde_json::to_vec(&summary).map_err(|e| CliError::Io(e.to_string()))?;
    line.push(b'\n');
    files.push((format!("{}.summary.jsonl", cfg.name), line));
    Ok(files)
}

/// Writes every file to a temporary name first and renames only once all
/// writes succeeded, so a failed run leaves nothing behind.
pub fn write_all(out_dir: &Path, files: &[(String, Vec<u8>)]) -> Result<Vec<PathBuf>, CliError> {
    let io = |what: &str, p: &Path, e: std::io::Error| CliError::Io(format!("{what} {}: {e}", p.display()));
    std::fs::create_dir_all(out_dir).map_err(|e| io("cannot create", out_dir, e))?;
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
    let cleanup = |staged: &[(PathBuf, PathBuf)]| {
        for (tmp, _) in staged {
            let _ = std::fs::remove_file(tmp);
        }
    };
    for (name, bytes) in files {
        let final_path = out_dir.join(name);
        let tmp = out_dir.join(format!(".{name}.partial"));
        if let Err(e) = std::fs::write(&tmp, bytes) {
            cleanup(&staged);
            let _ = std::fs::remove_file(&tmp);
            return Err(io("cannot write", &tmp, e));
        }
        staged.push((tmp, final_path));
    }
    for (i, (tmp, dst)) in staged.iter().enumerate() {
        if let Err(e) = std::fs::rename(tmp, dst) {
            cleanup(&staged[i..]);
            for (_, done) in &staged[..i] {
                let _ = std::fs::remove_file(done);
            }
            return Err(io("cannot rename", tmp, e));
        }
    }
    Ok(staged.into_iter().map(|(_, p)| p).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_carry_seventeen_digits() {
        let mut t = Table::new("", &["n", "x", "ok"]);
        t.push(row![3usize, 0.1, true]);
        t.push(row![4usize, -2.5e-300, false]);
        let text = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(text, "n,x,ok\n3,1.0000000000000001e-1,true\n4,-2.5000000000000000e-300,false\n");
        let back: f64 = "1.0000000000000001e-1".parse().unwrap();
        assert_eq!(back, 0.1);
    }

    #[test]
    fn failed_write_leaves_no_files() {
        let dir = tempfile::tempdir().unwrap();
        // a directory where a file should go makes the rename fail
        std::fs::create_dir(dir.path().join("b.csv")).unwrap();
        std::fs::write(dir.path().join("b.csv").join("keep"), b"x").unwrap();
        let files = vec![("a.csv".to_string(), b"1".to_vec()), ("b.csv".to_string(), b"2".to_vec())];
        assert!(write_all(dir.path(), &files).is_err());
        let mut left: Vec<String> =
            std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
        left.sort();
        assert_eq!(left, vec!["b.csv".to_string()]);
    }
}
