use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use tdforge::constructions::DEFAULT_MATERIALIZATION_CAP;
use tdforge::search::{DEFAULT_ENUMERATION_CAP, DEFAULT_MIN_ANCHORED_CAP, DEFAULT_SAMPLE_SIZE, DEFAULT_TREEWIDTH_CAP};

pub const CAP_ENV: &str = "TDFORGE_CAP_VERTICES";

/// Desk-scale guardrails. Precedence: command-line flag, then the
/// `TDFORGE_CAP_VERTICES` variable (materialization cap only), then the config
/// file, then the built-in default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub materialization_cap: u64,
    pub treewidth_cap: usize,
    pub enumeration_cap: u64,
    pub sample_size: usize,
    pub min_anchored_cap: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            materialization_cap: DEFAULT_MATERIALIZATION_CAP,
            treewidth_cap: DEFAULT_TREEWIDTH_CAP,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            sample_size: DEFAULT_SAMPLE_SIZE,
            min_anchored_cap: DEFAULT_MIN_ANCHORED_CAP,
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let mut config = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))?
            }
            None => Config::default(),
        };
        if let Ok(v) = std::env::var(CAP_ENV) {
            config.materialization_cap = v.trim().parse().with_context(|| format!("{CAP_ENV}={v} is not a number"))?;
        }
        Ok(config)
    }
}
