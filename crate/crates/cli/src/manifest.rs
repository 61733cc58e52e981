//! Run manifests: every command leaves a JSON record of what it did, with
//! enough detail to reproduce the run. Timings and the timestamp vary
//! between runs; everything else is deterministic.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct ManifestEntry {
    pub name: String,
    pub input: String,
    pub outputs: Vec<String>,
    /// "ok" or the error text for this input.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total_ms: Option<f64>,
}

impl ManifestEntry {
    pub fn is_ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: String,
    /// The argv the run was invoked with.
    pub command: Vec<String>,
    pub created_unix_ms: u128,
    /// Echo of the effective configuration, shape depending on the command.
    pub config: serde_json::Value,
    pub wall_ms: f64,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn new(config: serde_json::Value) -> Self {
        Self {
            tool: format!("saldet {}", env!("CARGO_PKG_VERSION")),
            command: std::env::args().collect(),
            created_unix_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis())
                .unwrap_or(0),
            config,
            wall_ms: 0.0,
            entries: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).context("serializing manifest")?;
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}
