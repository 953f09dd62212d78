use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::Result;

/// What is needed to rerun an experiment bit for bit: the resolved
/// configuration (written beside the manifest), its hash, the crate version
/// and the generator seed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub kind: String,
    pub config_hash: String,
    pub version: String,
    pub rng_seed: u64,
    /// Step size actually used, when the experiment integrates in time.
    pub dt: Option<f64>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(cfg: &ExperimentConfig, dt: Option<f64>) -> Self {
        Self {
            kind: cfg.kind.to_string(),
            config_hash: cfg.hash(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            rng_seed: cfg.rng_seed,
            dt,
            outputs: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind = {}", self.kind);
        let _ = writeln!(s, "config_hash = {}", self.config_hash);
        let _ = writeln!(s, "version = {}", self.version);
        let _ = writeln!(s, "rng_seed = {}", self.rng_seed);
        if let Some(dt) = self.dt {
            let _ = writeln!(s, "dt = {dt:?}");
        }
        let _ = writeln!(s, "outputs = {}", self.outputs.join(", "));
        s
    }
}

/// Writes `manifest.txt` and `config.txt` (the resolved configuration)
/// into `dir`.
pub fn write_manifest(dir: &Path, cfg: &ExperimentConfig, manifest: &Manifest) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.txt"), cfg.to_key_values().canonical())?;
    let path = dir.join("manifest.txt");
    fs::write(&path, manifest.to_text())?;
    Ok(path)
}
