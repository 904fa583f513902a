use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Experiment {
    #[serde(rename = "spectrum2le")]
    Spectrum2le,
    #[serde(rename = "twophoton2le")]
    TwoPhoton2le,
    #[serde(rename = "g2coherent")]
    G2Coherent,
    #[serde(rename = "router")]
    Router,
    #[serde(rename = "latticeT")]
    LatticeT,
    #[serde(rename = "latticeG2")]
    LatticeG2,
    #[serde(rename = "rydbergRun")]
    RydbergRun,
    #[serde(rename = "rydbergBound")]
    RydbergBound,
    #[serde(rename = "blochCheck")]
    BlochCheck,
}

impl Experiment {
    pub const ALL: [Experiment; 9] = [
        Experiment::Spectrum2le,
        Experiment::TwoPhoton2le,
        Experiment::G2Coherent,
        Experiment::Router,
        Experiment::LatticeT,
        Experiment::LatticeG2,
        Experiment::RydbergRun,
        Experiment::RydbergBound,
        Experiment::BlochCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Spectrum2le => "spectrum2le",
            Experiment::TwoPhoton2le => "twophoton2le",
            Experiment::G2Coherent => "g2coherent",
            Experiment::Router => "router",
            Experiment::LatticeT => "latticeT",
            Experiment::LatticeG2 => "latticeG2",
            Experiment::RydbergRun => "rydbergRun",
            Experiment::RydbergBound => "rydbergBound",
            Experiment::BlochCheck => "blochCheck",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| CliError::Config(format!("unknown experiment `{s}`")))
    }
}

/// Run configuration as read from JSON. Unknown keys are rejected here and
/// in every parameter block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub emit_svg: bool,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        Self {
            experiment,
            params: Value::Null,
            output_dir: None,
            seed: 0,
            emit_svg: false,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if !(cfg.params.is_null() || cfg.params.is_object()) {
            return Err(CliError::Config("`params` must be an object".into()));
        }
        Ok(cfg)
    }

    /// Deserializes the parameter block; a missing block yields the defaults.
    pub fn params<T: DeserializeOwned + Default>(&self) -> Result<T, CliError> {
        if self.params.is_null() {
            return Ok(T::default());
        }
        serde_json::from_value(self.params.clone())
            .map_err(|e| CliError::Config(format!("params for {}: {e}", self.experiment)))
    }
}
