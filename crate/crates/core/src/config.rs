//! Run configuration files (TOML or JSON).
//!
//! Every key is optional; omitted keys take the defaults of
//! [`RunConfig::default`]. Unknown keys are rejected with their path.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::ChannelConfig;
use crate::deploy::{Algorithm, BlockageMode};
use crate::error::{Error, Result};
use crate::sim::{AlgoSettings, CampaignConfig, LosSource, ScenarioConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Root seed; every random stream derives from it.
    pub seed: u64,
    /// Where output files go.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    pub rounds: usize,
    pub algorithms: Vec<Algorithm>,
    pub blockage_mode: BlockageMode,
    pub n_uavs: usize,
    pub los: LosSource,
    pub scenario: ScenarioConfig,
    pub channel: ChannelConfig,
    pub settings: AlgoSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        CampaignConfig::default().into()
    }
}

impl From<CampaignConfig> for RunConfig {
    fn from(c: CampaignConfig) -> Self {
        Self {
            seed: c.seed,
            output_dir: None,
            rounds: c.rounds,
            algorithms: c.algorithms,
            blockage_mode: c.blockage_mode,
            n_uavs: c.n_uavs,
            los: c.los,
            scenario: c.scenario,
            channel: c.channel,
            settings: c.settings,
        }
    }
}

impl RunConfig {
    pub fn campaign(&self) -> CampaignConfig {
        CampaignConfig {
            rounds: self.rounds,
            seed: self.seed,
            scenario: self.scenario,
            channel: self.channel,
            algorithms: self.algorithms.clone(),
            settings: self.settings,
            blockage_mode: self.blockage_mode,
            n_uavs: self.n_uavs,
            los: self.los,
        }
    }

    /// Parses TOML, or JSON when `json` is set.
    pub fn parse(text: &str, json: bool) -> Result<Self> {
        let parsed = if json {
            let de = &mut serde_json::Deserializer::from_str(text);
            serde_path_to_error::deserialize(de).map_err(|e| (e.path().to_string(), e.inner().to_string()))
        } else {
            let de = toml::Deserializer::parse(text).map_err(|e| Error::config(e.to_string()))?;
            serde_path_to_error::deserialize(de).map_err(|e| (e.path().to_string(), e.inner().to_string()))
        };
        parsed.map_err(|(path, msg)| Error::config(format!("at `{path}`: {}", msg.trim())))
    }

    /// Loads a file, choosing the format by extension (`.json` or TOML).
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, json).map_err(|e| match e {
            Error::Config(m) => Error::Parse {
                path: path.to_path_buf(),
                message: m,
            },
            other => other,
        })
    }

    /// Default configuration rendered as TOML, for help output.
    pub fn default_toml() -> String {
        toml::to_string_pretty(&Self::default()).expect("default config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_toml_and_json() {
        let d = RunConfig::default();
        assert_eq!(RunConfig::parse(&RunConfig::default_toml(), false).unwrap(), d);
        let j = serde_json::to_string(&d).unwrap();
        assert_eq!(RunConfig::parse(&j, true).unwrap(), d);
        assert_eq!(d.channel.snr_threshold_db, 22.0);
        assert_eq!(d.settings.delta, 1.0);
    }

    #[test]
    fn unknown_key_is_reported_with_path() {
        let err = RunConfig::parse("[channel]\nnoise_dbmm = -90\n", false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("channel.noise_dbmm"), "{msg}");
        let err = RunConfig::parse(r#"{"settings": {"delta": "x"}}"#, true).unwrap_err();
        assert!(err.to_string().contains("settings.delta"), "{err}");
    }

    #[test]
    fn partial_file_keeps_defaults() {
        let c = RunConfig::parse("rounds = 5\n[scenario.buildings]\ndensity = 0.0\n", false).unwrap();
        assert_eq!(c.rounds, 5);
        assert_eq!(c.scenario.buildings.density, 0.0);
        assert_eq!(c.scenario.buildings.rayleigh_scale, ScenarioConfig::default().buildings.rayleigh_scale);
    }
}
