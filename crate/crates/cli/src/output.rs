use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use geolab::export::{real, Table};
use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub enum Cell {
    Real(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Real(v) => real(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Real(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A named table written as `<name>.csv` or `<name>.json`.
pub struct Dataset {
    pub name: &'static str,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Dataset {
    pub fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self { name, header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn render(&self, format: Format) -> io::Result<String> {
        match format {
            Format::Csv => {
                let mut t = Table::new(Vec::new(), &self.header)?;
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(Cell::csv).collect();
                    t.row(&cells)?;
                }
                String::from_utf8(t.finish()?).map_err(io::Error::other)
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let m: Map<String, Value> =
                            self.header.iter().zip(r).map(|(h, c)| (h.to_string(), c.json())).collect();
                        Value::Object(m)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&rows).map_err(io::Error::other)?;
                s.push('\n');
                Ok(s)
            }
        }
    }
}

/// Everything one experiment produces.
pub struct Report {
    pub experiment: &'static str,
    pub parameters: Value,
    pub tolerances: Value,
    pub summary: Map<String, Value>,
    pub datasets: Vec<Dataset>,
    /// Files written verbatim regardless of format, e.g. point clouds.
    pub raw: Vec<(String, String)>,
}

impl Report {
    pub fn new(experiment: &'static str, parameters: impl Serialize, tolerances: Value) -> Self {
        Self {
            experiment,
            parameters: serde_json::to_value(parameters).unwrap_or(Value::Null),
            tolerances,
            summary: Map::new(),
            datasets: Vec::new(),
            raw: Vec::new(),
        }
    }

    pub fn summary(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    /// Writes the data files and `manifest.json` into `dir`; returns the paths.
    pub fn write(&self, dir: &Path, format: Format, wall_time: f64) -> io::Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let ext = match format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let mut files = Vec::new();
        for d in &self.datasets {
            let path = dir.join(format!("{}.{ext}", d.name));
            fs::write(&path, d.render(format)?)?;
            files.push(path);
        }
        for (name, body) in &self.raw {
            let path = dir.join(name);
            fs::write(&path, body)?;
            files.push(path);
        }
        let names: Vec<String> =
            files.iter().filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned())).collect();
        let manifest = json!({
            "experiment": self.experiment,
            "library_version": env!("CARGO_PKG_VERSION"),
            "format": format,
            "parameters": self.parameters,
            "tolerances": self.tolerances,
            "summary": self.summary,
            "files": names,
            "wall_time_seconds": wall_time,
        });
        let path = dir.join("manifest.json");
        fs::write(&path, serde_json::to_string_pretty(&manifest).map_err(io::Error::other)? + "\n")?;
        files.push(path);
        Ok(files)
    }
}
