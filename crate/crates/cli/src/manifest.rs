//! Run manifests: the configuration that determines an output, hashed so that
//! every artifact can name the run it came from.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything that determines the bytes of an output. Timing and cache
/// counters live outside it so that replays hash identically.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ManifestConfig {
    pub subcommand: String,
    /// Command line after the binary name, without `--manifest`.
    pub args: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub workers: usize,
    pub samples: Option<u64>,
    pub sampler: Option<String>,
    pub memo_budget: Option<String>,
    pub memo_policy: Option<String>,
    pub trials: Option<usize>,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub hash: String,
    pub config: ManifestConfig,
    pub wall_clock_secs: f64,
    pub neighborhoods_constructed: Option<u64>,
}

impl ManifestConfig {
    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        Ok(())
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("manifest config serializes");
        hex::encode(Sha256::digest(&json))
    }
}

/// Drops `--manifest <path>` / `--manifest=<path>` so the recorded command
/// line does not depend on where the manifest itself is written.
pub fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

pub fn read(path: &Path) -> Result<RunManifest> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read manifest {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{} is not a run manifest", path.display()))
}
