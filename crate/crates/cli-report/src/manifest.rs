//! Self-describing records of completed runs.

use process_core::{decimal12, Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

/// Everything needed to reproduce a run and check its result: the command,
/// its full parameter map, the seed, and the result payload, plus the
/// artifact version and RNG so stale manifests are recognizable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// Version of the workbench that produced the run.
    pub artifact_version: String,
    /// Subcommand name.
    pub command: String,
    /// Seed the run used, when it consumed randomness.
    pub seed: Option<u64>,
    /// Every parameter of the run, rendered as strings in stable order.
    pub params: BTreeMap<String, String>,
    /// RNG family driving all sampling.
    pub rng: String,
    /// Wall-clock duration in seconds (decimal string, 12 significant
    /// digits).
    pub duration_seconds: String,
    /// The command's result payload.
    pub result: Value,
}

impl RunManifest {
    pub fn new(
        command: &str,
        seed: Option<u64>,
        params: BTreeMap<String, String>,
        duration_seconds: f64,
        result: Value,
    ) -> Self {
        RunManifest {
            artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            seed,
            params,
            rng: process_core::rng::RNG_ALGORITHM.to_string(),
            duration_seconds: decimal12(duration_seconds),
            result,
        }
    }

    /// File name the manifest is stored under inside an output directory.
    pub fn file_name(&self) -> String {
        format!("{}-manifest.json", self.command)
    }

    /// Writes the manifest as pretty-printed JSON into `dir`, creating the
    /// directory if needed, and returns the file path.
    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::Config(format!("cannot create output directory: {e}")))?;
        let path = dir.join(self.file_name());
        let text = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Config(format!("cannot serialize manifest: {e}")))?;
        std::fs::write(&path, text)
            .map_err(|e| Error::Config(format!("cannot write manifest: {e}")))?;
        Ok(path)
    }

    /// Loads a manifest previously written by [`write`](Self::write).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read manifest: {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("cannot parse manifest: {e}")))
    }
}
