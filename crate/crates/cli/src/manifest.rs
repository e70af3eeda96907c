use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Config;

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config: Config,
    /// Input path ↦ SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub seed: u64,
    pub version: String,
    /// Seconds since the Unix epoch at start.
    pub started_at: u64,
    pub elapsed_ms: u128,
    pub outputs: Vec<String>,
    pub exit_code: i32,
}

/// Collects inputs and outputs while a command runs.
#[derive(Debug, Default)]
pub struct Recorder {
    pub inputs: BTreeMap<String, String>,
    pub outputs: Vec<String>,
}

impl Recorder {
    /// Reads an input file, remembering its digest.
    pub fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(bytes)
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))?;
        self.outputs.push(path.display().to_string());
        Ok(())
    }
}

/// `--manifest` if given, else `<output>.manifest.json`, else the working-directory default.
pub fn manifest_path(explicit: Option<&Path>, output: Option<&Path>) -> PathBuf {
    if let Some(p) = explicit {
        return p.to_path_buf();
    }
    match output {
        Some(o) => {
            let mut s = o.as_os_str().to_owned();
            s.push(".manifest.json");
            PathBuf::from(s)
        }
        None => PathBuf::from("tdforge-run.manifest.json"),
    }
}

pub fn now() -> (SystemTime, u64) {
    let t = SystemTime::now();
    (t, t.duration_since(UNIX_EPOCH).unwrap_or(Duration::ZERO).as_secs())
}
