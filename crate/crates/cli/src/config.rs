//! Parameter resolution: command-line flag, then the JSON config file, then
//! the built-in default.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Default)]
pub struct Config {
    values: Map<String, Value>,
    /// Resolved parameters, recorded in the manifest.
    resolved: Map<String, Value>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else { return Ok(Config::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        match serde_json::from_str(&text) {
            Ok(Value::Object(values)) => Ok(Config { values, resolved: Map::new() }),
            Ok(_) => Err(CliError::Usage("config must be a JSON object".into())),
            Err(e) => Err(CliError::Usage(format!("invalid config {}: {e}", path.display()))),
        }
    }

    /// Rejects config keys the command does not know.
    pub fn restrict(&self, allowed: &[&str]) -> Result<(), CliError> {
        for key in self.values.keys() {
            if key != "out" && key != "seed" && !allowed.contains(&key.as_str()) {
                return Err(CliError::Usage(format!("unknown config key {key:?}")));
            }
        }
        Ok(())
    }

    fn lookup<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key:?}: {e}"))),
        }
    }

    fn record<T: serde::Serialize>(&mut self, key: &str, value: &T) {
        self.resolved.insert(key.to_string(), serde_json::to_value(value).expect("parameters serialize"));
    }

    pub fn or<T: DeserializeOwned + serde::Serialize>(
        &mut self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        let v = self.lookup(flag, key)?.unwrap_or(default);
        self.record(key, &v);
        Ok(v)
    }

    pub fn require<T: DeserializeOwned + serde::Serialize>(&mut self, flag: Option<T>, key: &str) -> Result<T, CliError> {
        let v = self.lookup(flag, key)?.ok_or_else(|| CliError::Usage(format!("missing --{key}")))?;
        self.record(key, &v);
        Ok(v)
    }

    /// A boolean switch: set on the command line or `true` in the config.
    pub fn switch(&mut self, flag: bool, key: &str) -> Result<bool, CliError> {
        let v = flag || self.lookup::<bool>(None, key)?.unwrap_or(false);
        self.record(key, &v);
        Ok(v)
    }

    pub fn out_dir(&self, flag: Option<PathBuf>) -> Result<PathBuf, CliError> {
        Ok(self.lookup(flag, "out")?.unwrap_or_else(|| PathBuf::from("out")))
    }

    pub fn seed(&mut self, flag: Option<u64>) -> Result<u64, CliError> {
        self.or(flag, "seed", 0)
    }

    pub fn resolved(&self) -> &Map<String, Value> {
        &self.resolved
    }
}

/// Comma separated numbers, as a string flag or a JSON array / string.
pub fn parse_list(s: &str, key: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{key}: cannot parse {t:?} as a number")))
        })
        .collect()
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
#[serde(untagged)]
pub enum NumberList {
    Text(String),
    Numbers(Vec<f64>),
}

impl NumberList {
    pub fn values(&self, key: &str) -> Result<Vec<f64>, CliError> {
        match self {
            NumberList::Text(s) => parse_list(s, key),
            NumberList::Numbers(v) => Ok(v.clone()),
        }
    }
}
