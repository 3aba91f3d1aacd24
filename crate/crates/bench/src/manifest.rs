use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::spec::ExperimentSpec;

/// Provenance record written next to every CSV.
#[derive(Debug, Serialize)]
pub struct RunManifest<'a> {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'a str,
    pub spec: &'a ExperimentSpec,
    pub seeds: &'a [u64],
    pub q_values: &'a [f64],
    pub rows: usize,
    pub failed_rows: usize,
    pub condition_number: f64,
}

/// `results.csv` -> `results.manifest.json`.
pub fn manifest_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("manifest.json")
}

pub fn write_manifest(csv_path: &Path, manifest: &RunManifest<'_>) -> Result<PathBuf> {
    let path = manifest_path(csv_path);
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest is serializable");
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}
