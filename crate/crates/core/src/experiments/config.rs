use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::graph::GraphFamily;

/// One experiment run. Top-level keys are shared by every experiment; the
/// `[options]` table holds experiment-specific keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub family: String,
    /// Patch radius for experiments working on a single patch.
    #[serde(default)]
    pub radius: Option<usize>,
    /// Scales (box sizes, radii or n values depending on the experiment).
    #[serde(default)]
    pub scales: Vec<usize>,
    /// Probability grid.
    #[serde(default)]
    pub p: Vec<f64>,
    #[serde(default = "default_replicas")]
    pub replicas: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub options: toml::Table,
}

fn default_replicas() -> u64 {
    1000
}

fn default_output() -> PathBuf {
    PathBuf::from("results")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        ExperimentConfig::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if !super::EXPERIMENTS.iter().any(|(name, _)| *name == self.experiment) {
            return Err(Error::Config(format!("unknown experiment '{}'", self.experiment)));
        }
        self.family()?.validate()?;
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be at least 1".into()));
        }
        if let Some(p) = self.p.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::Config(format!("probability {p} is outside [0,1]")));
        }
        Ok(())
    }

    pub fn family(&self) -> Result<GraphFamily> {
        self.family.parse()
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    pub fn opt_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.options.get(key) {
            None => Ok(default),
            Some(toml::Value::Float(x)) => Ok(*x),
            Some(toml::Value::Integer(x)) => Ok(*x as f64),
            Some(v) => Err(Error::Config(format!("option '{key}' must be a number, got {v}"))),
        }
    }

    pub fn opt_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.options.get(key) {
            None => Ok(default),
            Some(toml::Value::Integer(x)) if *x >= 0 => Ok(*x as usize),
            Some(v) => Err(Error::Config(format!("option '{key}' must be a nonnegative integer, got {v}"))),
        }
    }

    pub fn opt_str(&self, key: &str) -> Result<Option<String>> {
        match self.options.get(key) {
            None => Ok(None),
            Some(toml::Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(Error::Config(format!("option '{key}' must be a string, got {v}"))),
        }
    }

    pub fn opt_bool(&self, key: &str, default: bool) -> Result<bool> {
        match self.options.get(key) {
            None => Ok(default),
            Some(toml::Value::Boolean(b)) => Ok(*b),
            Some(v) => Err(Error::Config(format!("option '{key}' must be a boolean, got {v}"))),
        }
    }

    pub fn opt_list<T: serde::de::DeserializeOwned>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.options.get(key) {
            None => Ok(None),
            Some(v) => v
                .clone()
                .try_into()
                .map(Some)
                .map_err(|e| Error::Config(format!("option '{key}': {e}"))),
        }
    }

    /// The patch radius, required by single-patch experiments.
    pub fn need_radius(&self) -> Result<usize> {
        self.radius.ok_or_else(|| Error::Config(format!("experiment '{}' needs a radius", self.experiment)))
    }

    /// The first grid probability, required by fixed-p experiments.
    pub fn need_p(&self) -> Result<f64> {
        self.p.first().copied().ok_or_else(|| Error::Config(format!("experiment '{}' needs p", self.experiment)))
    }
}
