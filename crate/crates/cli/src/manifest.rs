use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use atrust_sim::SimConfig;
use serde::{Deserialize, Serialize};

use crate::settings::{RunSettings, ValueSource};

/// Everything needed to reproduce a run and locate its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    /// Subcommand name.
    pub command: String,
    /// Full argument vector as given.
    pub arguments: Vec<String>,
    pub rng_algorithm: String,
    /// Resolved configuration with every default filled in.
    pub config: SimConfig,
    pub run: RunSettings,
    /// Layer that supplied each `section.key` field.
    pub provenance: BTreeMap<String, ValueSource>,
    /// Artifact name to file path.
    pub artifacts: BTreeMap<String, String>,
    pub wall_clock_seconds: f64,
}

/// On-disk shape of `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub manifest: RunManifest,
    pub summary: serde_json::Value,
}

impl Report {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("malformed manifest {}", path.display()))
    }
}
