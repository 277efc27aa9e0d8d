use std::path::{Path, PathBuf};

use hybound_core::empirical::{GapRecord, PROTOCOL};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;

/// Provenance written next to every `experiment` CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    /// SHA-256 of the canonical TOML form of the config.
    pub config_hash: String,
    pub version: String,
    /// RFC 3339, UTC.
    pub timestamp: String,
    pub command: String,
    pub arguments: Vec<String>,
    pub protocol: String,
    pub seeds: Vec<u64>,
    pub cells: usize,
    /// `(seed, N)` cells whose training diverged.
    pub diverged: Vec<(u64, usize)>,
    pub config: ExperimentConfig,
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(cfg.to_toml().as_bytes()))
}

impl RunManifest {
    pub fn new(command: &str, arguments: Vec<String>, cfg: &ExperimentConfig, records: &[GapRecord]) -> Self {
        Self {
            config_hash: config_hash(cfg),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command: command.to_string(),
            arguments,
            protocol: PROTOCOL.to_string(),
            seeds: cfg.seeds.clone(),
            cells: records.len(),
            diverged: records.iter().filter(|r| r.diverged).map(|r| (r.seed, r.n)).collect(),
            config: cfg.clone(),
        }
    }
}

/// `runs/gap.csv` → `runs/gap.manifest.json`.
pub fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.json")
}
