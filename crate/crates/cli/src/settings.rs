use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use idcap_core::table::Table;
use idcap_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::Format;

pub struct Ctx {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
    file: Map<String, Value>,
}

impl Ctx {
    pub fn new(
        config: Option<&Path>,
        seed: Option<u64>,
        out: Option<PathBuf>,
        format: Format,
    ) -> Result<Self> {
        let mut file = match config {
            None => Map::new(),
            Some(path) => match serde_json::from_str::<Value>(&fs::read_to_string(path)?)? {
                Value::Object(m) => m,
                _ => return Err(Error::param("config", "must be a JSON object")),
            },
        };
        let file_seed = match file.remove("seed") {
            None => None,
            Some(v) => Some(
                v.as_u64()
                    .ok_or_else(|| Error::param("seed", "must be a non-negative integer"))?,
            ),
        };
        Ok(Ctx {
            seed: seed.or(file_seed).unwrap_or(0),
            out,
            format,
            file,
        })
    }

    /// Config file keys overlaid with the flags that were given, decoded
    /// into `S` (unknown keys rejected).
    pub fn settings<S: DeserializeOwned, A: Serialize>(&self, flags: &A) -> Result<S> {
        let mut merged = self.file.clone();
        if let Value::Object(m) = serde_json::to_value(flags)? {
            for (k, v) in m {
                if !v.is_null() {
                    merged.insert(k, v);
                }
            }
        }
        serde_json::from_value(Value::Object(merged))
            .map_err(|e| Error::param("config", e.to_string()))
    }

    /// Everything that determines the output; threads and output path are
    /// deliberately absent.
    pub fn fingerprint<S: Serialize>(&self, command: &str, settings: &S) -> Result<Value> {
        Ok(json!({
            "command": command,
            "seed": self.seed,
            "settings": serde_json::to_value(settings)?,
        }))
    }

    pub fn write(&self, bytes: &[u8]) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, bytes)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(bytes)?;
                stdout.flush()?;
            }
        }
        Ok(())
    }

    pub fn emit_table(&self, table: &Table, config: &Value) -> Result<()> {
        match self.format {
            Format::Csv => self.write(table.to_csv_string(config).as_bytes()),
            Format::Json => self.emit_json(&table.to_json(config)),
        }
    }

    pub fn emit_json(&self, v: &Value) -> Result<()> {
        self.write((serde_json::to_string_pretty(v)? + "\n").as_bytes())
    }
}
