//! Tabular results and their CSV / JSON serialization.
//!
//! Floats are written in scientific notation with 12 significant digits so
//! that identical inputs give byte-identical files.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
}

impl Cell {
    fn text(&self) -> String {
        match *self {
            Cell::Float(v) => format!("{v:.11e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Float(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Bool(v) => json!(v),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

/// One output file. Column names carry their unit as a suffix.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(name: &str, columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// CSV with a trailing `fingerprint` column.
    pub fn to_csv(&self, fingerprint: &str) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Internal(format!("csv: {e}"));
        w.write_record(self.columns.iter().map(String::as_str).chain(["fingerprint"]))
            .map_err(io)?;
        for row in &self.rows {
            let mut record: Vec<String> = row.iter().map(Cell::text).collect();
            record.push(fingerprint.to_string());
            w.write_record(&record).map_err(io)?;
        }
        w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))
    }

    pub fn to_json(&self, fingerprint: &str) -> Value {
        json!({
            "table": self.name,
            "fingerprint": fingerprint,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Everything one experiment produced.
#[derive(Clone, Debug)]
pub struct Report {
    pub experiment: String,
    pub tables: Vec<Table>,
    pub summary: Map<String, Value>,
    /// Extra files written verbatim, as `(file name, contents)`.
    pub attachments: Vec<(String, String)>,
}

impl Report {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            tables: Vec::new(),
            summary: Map::new(),
            attachments: Vec::new(),
        }
    }

    pub fn scalar(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    /// Writes every table plus `summary.json`, merging with any summary
    /// already in `dir`. Returns the paths written.
    pub fn write(&self, dir: &Path, format: Format, fingerprint: &str) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        for table in &self.tables {
            let (path, bytes) = match format {
                Format::Csv => (dir.join(format!("{}.csv", table.name)), table.to_csv(fingerprint)?),
                Format::Json => {
                    let mut text = serde_json::to_string_pretty(&table.to_json(fingerprint))?;
                    text.push('\n');
                    (dir.join(format!("{}.json", table.name)), text.into_bytes())
                }
            };
            fs::write(&path, bytes)?;
            written.push(path);
        }

        for (name, contents) in &self.attachments {
            let path = dir.join(name);
            fs::write(&path, contents)?;
            written.push(path);
        }

        let summary_path = dir.join("summary.json");
        let mut all = match fs::read_to_string(&summary_path) {
            Ok(text) => match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => map,
                _ => Map::new(),
            },
            Err(_) => Map::new(),
        };
        let mut entry = self.summary.clone();
        entry.insert("fingerprint".into(), fingerprint.into());
        all.insert(self.experiment.clone(), Value::Object(entry));
        let mut text = serde_json::to_string_pretty(&Value::Object(all))?;
        text.push('\n');
        fs::write(&summary_path, text)?;
        written.push(summary_path);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut t = Table::new("demo", ["phi_deg", "k", "ok"]);
        t.push(vec![(-18.0).into(), 3usize.into(), true.into()]);
        t.push(vec![0.1234567890123456.into(), 0usize.into(), false.into()]);
        t
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(table().to_csv("abc").unwrap()).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "phi_deg,k,ok,fingerprint");
        assert_eq!(lines[1], "-1.80000000000e1,3,true,abc");
        assert_eq!(lines[2], "1.23456789012e-1,0,false,abc");
    }

    #[test]
    fn json_layout() {
        let v = table().to_json("abc");
        assert_eq!(v["columns"][1], "k");
        assert_eq!(v["rows"][0][0], -18.0);
        assert_eq!(v["fingerprint"], "abc");
    }

    #[test]
    fn summary_merges_experiments() {
        let dir = tempfile::tempdir().unwrap();
        let mut a = Report::new("design");
        a.scalar("n_g", 2.5);
        a.tables.push(table());
        a.write(dir.path(), Format::Csv, "f1").unwrap();
        let mut b = Report::new("coverage");
        b.scalar("phi_max_deg", 30.0);
        b.write(dir.path(), Format::Json, "f1").unwrap();
        let summary: Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
        assert_eq!(summary["design"]["n_g"], 2.5);
        assert_eq!(summary["coverage"]["phi_max_deg"], 30.0);
        assert!(dir.path().join("demo.csv").exists());
    }
}
