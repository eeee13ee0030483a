//! Layered run settings: built-in defaults, then a TOML file, then command-line
//! flags, with the winning layer remembered for every field.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use atrust_sim::SimConfig;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

/// Sections whose keys are `SimConfig` sub-structures; every other scalar field
/// of `SimConfig` lives in `[sim]`.
const NESTED: [&str; 5] = ["solver", "weights", "population", "baseline", "topology"];
const SIM: &str = "sim";
const RUN: &str = "run";

/// Layer that supplied a field's final value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueSource {
    Default,
    File,
    Cli,
}

/// Execution settings that are not part of the simulated system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunSettings {
    pub trials: usize,
    /// Worker threads; `0` means one per available core.
    pub jobs: usize,
}

impl Default for RunSettings {
    fn default() -> Self {
        Self { trials: 10, jobs: 0 }
    }
}

/// Resolved settings plus where each field came from.
#[derive(Debug, Clone)]
pub struct Settings {
    document: Map<String, Value>,
    provenance: BTreeMap<String, ValueSource>,
}

impl Default for Settings {
    fn default() -> Self {
        Self::new()
    }
}

impl Settings {
    /// Every field at its built-in default.
    pub fn new() -> Self {
        let document = to_document(&SimConfig::default(), &RunSettings::default());
        let mut provenance = BTreeMap::new();
        for (section, fields) in &document {
            for key in fields.as_object().expect("sections are tables").keys() {
                provenance.insert(format!("{section}.{key}"), ValueSource::Default);
            }
        }
        Self { document, provenance }
    }

    /// Applies a TOML config file.
    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config file {}", path.display()))?;
        self.apply_toml(&text)
            .with_context(|| format!("malformed config file {}", path.display()))
    }

    /// Applies TOML text. Top-level scalars count as `[sim]` entries.
    pub fn apply_toml(&mut self, text: &str) -> Result<()> {
        let table: toml::Table = toml::from_str(text)?;
        for (name, item) in table {
            match item {
                toml::Value::Table(fields) => {
                    for (key, value) in fields {
                        self.set(&format!("{name}.{key}"), toml_to_json(&value)?, ValueSource::File)?;
                    }
                }
                other => self.set(&format!("{SIM}.{name}"), toml_to_json(&other)?, ValueSource::File)?,
            }
        }
        Ok(())
    }

    /// Applies one command-line override of `section.key`.
    pub fn set_cli(&mut self, path: &str, value: impl Into<Value>) -> Result<()> {
        self.set(path, value.into(), ValueSource::Cli)
    }

    fn set(&mut self, path: &str, value: Value, source: ValueSource) -> Result<()> {
        let (section, key) = path
            .split_once('.')
            .ok_or_else(|| anyhow!("config key `{path}` must be written as section.key"))?;
        let fields = self
            .document
            .get_mut(section)
            .and_then(Value::as_object_mut)
            .ok_or_else(|| anyhow!("unknown config section `{section}` (in `{path}`)"))?;
        let known = fields.contains_key(key) || (section == "topology" && key == "degree");
        if !known {
            bail!("unknown config key `{path}`");
        }
        let previous = fields.insert(key.to_string(), value);
        if let Err(e) = self.resolve() {
            let fields = self.document.get_mut(section).and_then(Value::as_object_mut).expect("section exists");
            match previous {
                Some(v) => fields.insert(key.to_string(), v),
                None => fields.remove(key),
            };
            bail!("invalid value for `{path}`: {e}");
        }
        self.provenance.insert(path.to_string(), source);
        Ok(())
    }

    fn resolve(&self) -> Result<(SimConfig, RunSettings)> {
        let mut sim = self.document[SIM].as_object().cloned().unwrap_or_default();
        for name in NESTED {
            sim.insert(name.to_string(), self.document[name].clone());
        }
        let config: SimConfig = serde_json::from_value(Value::Object(sim))?;
        let run: RunSettings = serde_json::from_value(self.document[RUN].clone())?;
        Ok((config, run))
    }

    /// Final configuration, validated.
    pub fn sim_config(&self) -> Result<SimConfig> {
        let (config, _) = self.resolve()?;
        config.validate()?;
        Ok(config)
    }

    pub fn run_settings(&self) -> Result<RunSettings> {
        let (_, run) = self.resolve()?;
        Ok(run)
    }

    pub fn provenance(&self) -> &BTreeMap<String, ValueSource> {
        &self.provenance
    }

    pub fn source_of(&self, path: &str) -> Option<ValueSource> {
        self.provenance.get(path).copied()
    }
}

fn to_document(config: &SimConfig, run: &RunSettings) -> Map<String, Value> {
    let Value::Object(mut fields) = serde_json::to_value(config).expect("config serializes") else {
        unreachable!("SimConfig serializes to an object");
    };
    let mut document = Map::new();
    for name in NESTED {
        let section = fields.remove(name).expect("nested section present");
        document.insert(name.to_string(), section);
    }
    document.insert(SIM.to_string(), Value::Object(fields));
    document.insert(RUN.to_string(), serde_json::to_value(run).expect("run settings serialize"));
    document
}

fn toml_to_json(value: &toml::Value) -> Result<Value> {
    Ok(match value {
        toml::Value::String(s) => Value::String(s.clone()),
        toml::Value::Integer(i) => Value::from(*i),
        toml::Value::Float(f) => serde_json::Number::from_f64(*f)
            .map(Value::Number)
            .ok_or_else(|| anyhow!("non-finite number {f}"))?,
        toml::Value::Boolean(b) => Value::Bool(*b),
        toml::Value::Array(items) => Value::Array(items.iter().map(toml_to_json).collect::<Result<_>>()?),
        toml::Value::Table(_) => bail!("nested tables are not supported"),
        toml::Value::Datetime(d) => bail!("dates are not supported ({d})"),
    })
}
