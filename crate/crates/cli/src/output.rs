use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Format, RunConfig};

pub const TOOL: &str = "staggered";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One CSV cell. Floats are written with 17 significant digits.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Cell {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Cell {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Cell {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Cell {
        Cell::Text(v)
    }
}

/// Result of one experiment, renderable as CSV or JSON.
#[derive(Debug, Clone)]
pub struct Report {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub json: Value,
}

impl Report {
    pub fn new(header: Vec<&'static str>, json: Value) -> Report {
        Report {
            header,
            rows: Vec::new(),
            json,
        }
    }

    pub fn row(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len(), self.header.len());
        self.rows.push(cells);
    }
}

/// SHA-256 of the effective configuration in its canonical JSON form.
pub fn config_hash(config: &RunConfig) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    let digest = Sha256::digest(&canonical);
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

pub fn render(report: &Report, config: &RunConfig, experiment: &str, format: Format) -> String {
    let hash = config_hash(config);
    match format {
        Format::Csv => {
            let mut out = format!("# {TOOL} {VERSION}\n# experiment: {experiment}\n# config-sha256: {hash}\n");
            out.push_str(&report.header.join(","));
            out.push('\n');
            for row in &report.rows {
                let cells: Vec<String> = row.iter().map(Cell::render).collect();
                out.push_str(&cells.join(","));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let doc = json!({
                "tool": TOOL,
                "version": VERSION,
                "config_sha256": hash,
                "experiment": experiment,
                "config": config,
                "result": report.json,
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
            s.push('\n');
            s
        }
    }
}

pub fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("value serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(Cell::from(0.1).render(), "1.0000000000000001e-1");
        assert_eq!(Cell::from(-2.0).render(), "-2.0000000000000000e0");
        let v: f64 = Cell::from(std::f64::consts::PI).render().parse().unwrap();
        assert_eq!(v, std::f64::consts::PI);
    }

    #[test]
    fn text_is_quoted_when_needed() {
        assert_eq!(Cell::from("a,b").render(), "\"a,b\"");
        assert_eq!(Cell::from("plain").render(), "plain");
    }

    #[test]
    fn hash_depends_on_content() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.params.seed = Some(1);
        assert_eq!(config_hash(&a), config_hash(&a.clone()));
        assert_ne!(config_hash(&a), config_hash(&b));
        assert_eq!(config_hash(&a).len(), 64);
    }
}
