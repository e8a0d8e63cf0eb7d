//! CSV payloads, checksums and the run manifest.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use mbring::analysis::{Spectrum, TransmissionCurve};
use mbring::ComplexEnvelope;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Version string recorded in manifests.
pub const TOOL_VERSION: &str = env!("MBRING_VERSION");

/// Formats a number with 15 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.14e}")
}

/// A CSV document built in memory, so the payload and its checksum agree.
#[derive(Debug, Clone)]
pub struct Table {
    text: String,
    columns: usize,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
            columns: header.len(),
        }
    }

    pub fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns);
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub fn field_table(env: &ComplexEnvelope) -> Table {
    let mut t = Table::new(&["tau_wc", "re", "im", "abs"]);
    for (tau, v) in env.times().zip(&env.samples) {
        t.row(&[tau, v.re, v.im, v.norm()]);
    }
    t
}

pub fn spectrum_table(spec: &Spectrum) -> Table {
    let mut t = Table::new(&["omega_over_wc", "re", "im", "abs"]);
    for (w, v) in spec.omegas().zip(&spec.values) {
        t.row(&[w, v.re, v.im, v.norm()]);
    }
    t
}

/// `(omega_over_wc, ratio, masked)` with the linear contour as an extra column.
pub fn transmission_table(curve: &TransmissionCurve, baseline: &TransmissionCurve) -> Table {
    let mut t = Table::new(&["omega_over_wc", "ratio", "masked", "linear"]);
    for (m, w) in curve.omegas().enumerate() {
        let masked = if curve.floor_mask[m] { 1.0 } else { 0.0 };
        t.row(&[w, curve.ratio[m], masked, baseline.ratio[m]]);
    }
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Path relative to the output directory.
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Writes `contents` to `dir/name` and records its checksum.
pub fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CliResult<FileRecord> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
    Ok(FileRecord {
        path: name.to_string(),
        bytes: contents.len(),
        sha256: sha256_hex(contents),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub label: String,
    pub status: Status,
    pub error: Option<String>,
    pub config: RunConfig,
    pub files: Vec<FileRecord>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub status: Status,
    pub wall_time_s: f64,
    pub threads: usize,
    pub runs: Vec<RunRecord>,
}

impl RunManifest {
    pub fn path(dir: &Path) -> PathBuf {
        dir.join("manifest.json")
    }

    pub fn write(&self, dir: &Path) -> CliResult<PathBuf> {
        let path = Self::path(dir);
        let text = serde_json::to_string_pretty(self).expect("manifest is always serializable");
        fs::write(&path, text + "\n").map_err(|e| CliError::io(&path, e))?;
        Ok(path)
    }

    pub fn load(dir: &Path) -> CliResult<Self> {
        let path = Self::path(dir);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}
