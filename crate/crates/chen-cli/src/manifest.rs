//! Run manifests: everything needed to reproduce a run byte-for-byte —
//! command, resolved arguments, input file hashes, numeric configuration,
//! seed and thread count. No timestamps, so identical runs write identical
//! manifests.

use anyhow::{Context, Result};
use chen_core::NumericConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Resolved command arguments, sorted by key.
    pub args: BTreeMap<String, String>,
    /// sha256 of every input file consumed.
    pub input_hashes: BTreeMap<String, String>,
    pub config: NumericConfig,
    pub threads: usize,
}

impl RunManifest {
    pub fn new(command: &str, config: &NumericConfig, threads: usize) -> Self {
        Self {
            tool: "chen".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            args: BTreeMap::new(),
            input_hashes: BTreeMap::new(),
            config: config.clone(),
            threads,
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn input(mut self, path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path)
            .with_context(|| format!("cannot hash input {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.input_hashes.insert(path.display().to_string(), hex);
        Ok(self)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)
            .with_context(|| format!("cannot write manifest {}", path.display()))?;
        Ok(())
    }
}
