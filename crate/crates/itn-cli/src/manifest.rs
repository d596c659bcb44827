//! Run manifest: config hash, resolved parameters, per-output checksums.
//! Written atomically (temp file + rename) after all data files exist.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub config_hash: String,
    pub code_version: String,
    pub seed: u64,
    pub started_utc: String,
    pub finished_utc: String,
    pub resolved: serde_json::Value,
    pub outputs: Vec<OutputRecord>,
    pub warnings: Vec<String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    format!("{:x}", h.finalize())
}

pub struct ManifestBuilder {
    command: String,
    config_hash: String,
    seed: u64,
    started: chrono::DateTime<chrono::Utc>,
    resolved: serde_json::Value,
    outputs: Vec<OutputRecord>,
    warnings: Vec<String>,
}

impl ManifestBuilder {
    pub fn new(command: &str, config_text: &str, seed: u64, resolved: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            config_hash: sha256_hex(config_text.as_bytes()),
            seed,
            started: chrono::Utc::now(),
            resolved,
            outputs: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        self.warnings.push(msg.into());
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Write a data file (refusing to clobber without `force`) and record
    /// its checksum.
    pub fn write_output(&mut self, dir: &Path, name: &str, bytes: &[u8], force: bool) -> anyhow::Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        if path.exists() && !force {
            anyhow::bail!(
                "output {} already exists; pass --force to overwrite",
                path.display()
            );
        }
        std::fs::write(&path, bytes)?;
        self.outputs.push(OutputRecord {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        });
        Ok(path)
    }

    /// Finalize and atomically write `manifest.json`.
    pub fn finish(self, dir: &Path) -> anyhow::Result<PathBuf> {
        let manifest = RunManifest {
            command: self.command,
            config_hash: self.config_hash,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: self.seed,
            started_utc: self.started.to_rfc3339(),
            finished_utc: chrono::Utc::now().to_rfc3339(),
            resolved: self.resolved,
            outputs: self.outputs,
            warnings: self.warnings,
        };
        std::fs::create_dir_all(dir)?;
        let tmp = dir.join(".manifest.json.tmp");
        std::fs::write(&tmp, serde_json::to_vec_pretty(&manifest)?)?;
        let path = dir.join("manifest.json");
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
