use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance of one CLI run.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: String,
    /// SHA-256 of the configuration file bytes.
    pub scenario_sha256: String,
    pub config_path: PathBuf,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub core_version: &'static str,
    pub timestamp_utc: String,
    pub seed: Option<u64>,
    pub steps_override: Option<usize>,
    pub weights_override: Option<Vec<f64>>,
    pub outputs: Vec<PathBuf>,
}

pub fn scenario_hash(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunRecord {
    pub fn new(
        command: &str,
        config: &[u8],
        config_path: &Path,
        seed: Option<u64>,
        steps_override: Option<usize>,
        weights_override: Option<Vec<f64>>,
        outputs: Vec<PathBuf>,
    ) -> Self {
        RunRecord {
            command: command.to_string(),
            scenario_sha256: scenario_hash(config),
            config_path: config_path.to_path_buf(),
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            core_version: ergopose_core::VERSION,
            timestamp_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            seed,
            steps_override,
            weights_override,
            outputs,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        text.push('\n');
        std::fs::write(path, text)
    }
}
