use std::path::PathBuf;

use lda_shift::SweepSpec;
use serde::{Deserialize, Serialize};

/// Everything needed to regenerate a sweep output bit for bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub tool_version: String,
    pub master_seed: u64,
    pub spec: SweepSpec,
    pub csv: PathBuf,
    pub json: Option<PathBuf>,
    pub wall_clock_seconds: f64,
}

pub fn sidecar_path(csv: &std::path::Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}
