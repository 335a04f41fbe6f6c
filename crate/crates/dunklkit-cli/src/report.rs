//! Result tables and their CSV and JSON emission.

use crate::config::SCHEMA_VERSION;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Schema tag written into every artifact.
pub fn schema_tag() -> String {
    format!("dunklkit-report/{SCHEMA_VERSION}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Table {
        Table { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResults {
    pub schema: String,
    /// `verify` or `experiment`.
    pub kind: String,
    pub name: String,
    pub seed: u64,
    pub passed: bool,
    pub metadata: BTreeMap<String, String>,
    pub summary: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
}

impl RunResults {
    pub fn new(kind: &str, name: &str, seed: u64) -> RunResults {
        RunResults {
            schema: schema_tag(),
            kind: kind.into(),
            name: name.into(),
            seed,
            passed: true,
            metadata: BTreeMap::new(),
            summary: BTreeMap::new(),
            tables: Vec::new(),
        }
    }
}

/// A number, or `null` when it is not finite.
pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map_or(Value::Null, Value::Number)
}

pub fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn from_path(p: &Path) -> Option<Format> {
        match p.extension()?.to_str()? {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

pub fn to_json(r: &RunResults) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("results serialize");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<RunResults, serde_json::Error> {
    serde_json::from_str(text)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One table as CSV, preceded by a `#` line carrying the schema tag.
pub fn table_csv(t: &Table) -> Result<String, csv::Error> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&t.columns)?;
    for row in &t.rows {
        w.write_record(row.iter().map(cell))?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8");
    Ok(format!("# {} table={}\n{body}", schema_tag(), t.name))
}

/// CSV paths for each table: `path` itself for a single table,
/// `<stem>.<table>.csv` beside it otherwise.
pub fn csv_paths(r: &RunResults, path: &Path) -> Vec<PathBuf> {
    if r.tables.len() == 1 {
        return vec![path.to_path_buf()];
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    let dir = path.parent().unwrap_or(Path::new(""));
    r.tables.iter().map(|t| dir.join(format!("{stem}.{}.csv", t.name))).collect()
}

/// Writes `r` to `path` in `format` and returns the files written.
pub fn emit_report(r: &RunResults, format: Format, path: &Path) -> std::io::Result<Vec<PathBuf>> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    match format {
        Format::Json => {
            std::fs::write(path, to_json(r))?;
            Ok(vec![path.to_path_buf()])
        }
        Format::Csv => {
            let paths = csv_paths(r, path);
            for (t, p) in r.tables.iter().zip(&paths) {
                let text = table_csv(t).map_err(std::io::Error::other)?;
                std::fs::write(p, text)?;
            }
            Ok(paths)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> RunResults {
        let mut r = RunResults::new("experiment", "demo", 3);
        let mut t = Table::new("rows", &["x", "label", "flag"]);
        t.push(vec![num(0.25), json!("a,b"), json!(true)]);
        t.push(vec![num(f64::INFINITY), Value::Null, json!(false)]);
        r.tables.push(t);
        r.metadata.insert("k".into(), "v".into());
        r
    }

    #[test]
    fn json_round_trip_and_stability() {
        let r = sample();
        let a = to_json(&r);
        assert_eq!(a, to_json(&r));
        assert_eq!(from_json(&a).unwrap(), r);
    }

    #[test]
    fn csv_layout() {
        let text = table_csv(&sample().tables[0]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# dunklkit-report/1"));
        assert_eq!(lines[1], "x,label,flag");
        assert_eq!(lines[2], "0.25,\"a,b\",true");
        assert_eq!(lines[3], ",,false");
    }
}
