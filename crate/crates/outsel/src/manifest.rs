//! Run manifests: a TOML echo of everything needed to repeat a run.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{IoError, Result};

pub const FILE_NAME: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Arguments as given, without the program name.
    pub argv: Vec<String>,
    pub seed: u64,
    pub started_unix: u64,
    pub wall_time_secs: f64,
    /// Resolved configuration, one entry per setting. Structured values
    /// (prior, sampler) are stored as JSON strings.
    pub settings: BTreeMap<String, String>,
    /// Files written by the run, relative to the output directory.
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, argv: Vec<String>, seed: u64) -> Self {
        Manifest {
            tool: "outsel".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            argv,
            seed,
            started_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_time_secs: 0.0,
            settings: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.settings.insert(key.into(), value.to_string());
    }

    pub fn set_json<T: Serialize>(&mut self, key: &str, value: &T) -> Result<()> {
        let s = serde_json::to_string(value).map_err(|e| IoError::Parse(e.to_string()))?;
        self.settings.insert(key.into(), s);
        Ok(())
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| IoError::Parse(format!("manifest: {e}")))
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        crate::write_atomic(&dir.join(FILE_NAME), self.to_toml()?.as_bytes())
    }

    pub fn read(dir: &Path) -> Result<Manifest> {
        let path = dir.join(FILE_NAME);
        let text = std::fs::read_to_string(&path).map_err(IoError::io(&path))?;
        toml::from_str(&text).map_err(|e| IoError::Parse(format!("{}: {e}", path.display())))
    }
}
