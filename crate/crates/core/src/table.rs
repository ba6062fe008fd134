//! Tabular output with a config fingerprint, as CSV or JSON.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Null,
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_nan() => "nan".into(),
            Cell::Float(v) if v.is_infinite() => if *v > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
            Cell::Null => String::new(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Null, Cell::Float)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
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

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

/// Hex SHA-256 of the compact JSON form of `config` (object keys sorted).
pub fn config_hash(config: &Value) -> String {
    hex::encode(Sha256::digest(config.to_string().as_bytes()))
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Float values of a column; non-numeric cells map to `None`.
    pub fn floats(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column(name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r[k] {
                    Cell::Float(v) => Some(v),
                    Cell::Int(v) => Some(v as f64),
                    _ => None,
                })
                .collect(),
        )
    }

    /// `# config_sha256=<hash> config=<json>`, the header, then one line per row.
    pub fn write_csv<W: Write>(&self, config: &Value, out: W) -> Result<()> {
        let mut out = out;
        writeln!(
            out,
            "# config_sha256={} config={}",
            config_hash(config),
            config
        )?;
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, config: &Value) -> String {
        let mut buf = Vec::new();
        self.write_csv(config, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn to_json(&self, config: &Value) -> Value {
        serde_json::json!({
            "config_sha256": config_hash(config),
            "config": config,
            "columns": self.columns,
            "rows": self.rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["D", "x", "label"]);
        t.push(vec![3usize.into(), 0.5.into(), "a,b".into()]);
        t.push(vec![4usize.into(), None.into(), "c".into()]);
        let cfg = json!({"b": 1, "a": [1, 2]});
        let s = t.to_csv_string(&cfg);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# config_sha256="));
        assert!(lines[0].ends_with("config={\"a\":[1,2],\"b\":1}"));
        assert_eq!(lines[1], "D,x,label");
        assert_eq!(lines[2], "3,0.5,\"a,b\"");
        assert_eq!(lines[3], "4,,c");
    }

    #[test]
    fn hash_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"x":1,"y":2}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"y":2,"x":1}"#).unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_ne!(config_hash(&a), config_hash(&json!({"x": 1})));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn floats_round_trip() {
        let mut t = Table::new(&["v"]);
        let v = 0.1 + 0.2;
        t.push(vec![v.into()]);
        let s = t.to_csv_string(&json!({}));
        let last = s.lines().last().unwrap();
        assert_eq!(last.parse::<f64>().unwrap(), v);
        assert_eq!(t.floats("v").unwrap(), vec![Some(v)]);
    }
}
