//! Structured run records.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::table::Table;

/// Everything needed to reproduce a run. Wall time is only recorded on
/// request so that records of identical runs are byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
    /// Input file path to SHA-256 of its bytes.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
    /// One table per output row, keyed by column name.
    #[serde(default)]
    pub results: Vec<BTreeMap<String, String>>,
}

impl RunRecord {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            seed: None,
            wall_time_seconds: None,
            inputs: BTreeMap::new(),
            parameters: BTreeMap::new(),
            results: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(())
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.into(), value.to_string());
    }

    pub fn set_results(&mut self, table: &Table) {
        self.results = table
            .rows
            .iter()
            .map(|row| {
                table
                    .header
                    .iter()
                    .map(|h| h.to_string())
                    .zip(row.iter().cloned())
                    .collect()
            })
            .collect();
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()?).with_context(|| format!("writing {}", path.display()))
    }
}
