//! Run configuration: crystal, pump and grid in one JSON document.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spdc_core::{CrystalConfig, Error, GridSpec, PumpSpec, Result};

/// Pump bandwidth maximizing the intensity purity at 1584 nm on the default
/// grid. Used when neither the config nor the command line sets one.
pub const DEFAULT_SIGMA_RAD_PER_PS: f64 = 0.72297;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "CrystalConfig::ppktp_default")]
    pub crystal: CrystalConfig,
    #[serde(default = "default_pump")]
    pub pump: PumpSpec,
    #[serde(default)]
    pub grid: GridSpec,
}

fn default_pump() -> PumpSpec {
    PumpSpec::degenerate(1584.0, DEFAULT_SIGMA_RAD_PER_PS)
}

impl Default for Config {
    fn default() -> Self {
        Self {
            crystal: CrystalConfig::ppktp_default(),
            pump: default_pump(),
            grid: GridSpec::default(),
        }
    }
}

impl Config {
    pub fn from_json(text: &str, origin: &str) -> Result<Self> {
        let cfg: Config = serde_json::from_str(text).map_err(|e| Error::Parse(format!("{origin}: {e}")))?;
        cfg.crystal.validate()?;
        cfg.pump.validate()?;
        Ok(cfg)
    }

    /// Reads `path`, or returns the built-in defaults when no path is given.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|source| Error::Io {
                    path: p.to_path_buf(),
                    source,
                })?;
                Self::from_json(&text, &p.display().to_string())
            }
        }
    }

    /// Degenerate signal/idler wavelength implied by the pump.
    pub fn lambda0_nm(&self) -> f64 {
        2.0 * self.pump.center_nm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        assert_eq!(Config::from_json("{}", "test").unwrap(), Config::default());
    }

    #[test]
    fn defaults_round_trip() {
        let text = serde_json::to_string(&Config::default()).unwrap();
        assert_eq!(Config::from_json(&text, "test").unwrap(), Config::default());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let err = Config::from_json(r#"{"pumps": {}}"#, "cfg.json").unwrap_err();
        assert!(err.to_string().contains("cfg.json"));
    }

    #[test]
    fn invalid_pump_is_rejected() {
        let err = Config::from_json(r#"{"pump": {"center_nm": 792, "sigma_rad_per_ps": -1}}"#, "x").unwrap_err();
        assert!(matches!(err, Error::InvalidParameter(_)));
    }

    #[test]
    fn missing_file_names_the_path() {
        let err = Config::load(Some(Path::new("/nonexistent/run.json"))).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/run.json"));
    }
}
