//! Run configuration, read from and embedded into JSON documents.
//!
//! Every number is dimensionless: times in `1/ω_c`, detunings in `ω_c`,
//! depths in `c/ω_c`. Omitted fields take their defaults, unknown fields are
//! rejected.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::Path;

use mbring::analysis::{DEFAULT_FLOOR, DEFAULT_WINDOW};
use mbring::mbsolver::SolverConfig;
use mbring::{BeamGeometry, MediumParams, PulseSpec, TimeGrid};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// `c·k(ω)` and group velocity of the medium; no pulse is propagated.
    Dispersion,
    /// The Bessel impulse response of the medium at each depth.
    Ringing,
    /// Linear propagation of the pump through the exact transfer function.
    Linear,
    /// Nonlinear propagation of the pump alone.
    SingleBeam,
    /// Nonlinear pump with a first-order probe.
    PumpProbe,
    /// Ringing of the pump interfering with a vacuum-delayed replica.
    Interference,
}

/// Data series a run may write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Fields,
    Spectra,
    Transmission,
    Nodes,
    Features,
    Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Outputs {
    /// Depths to report besides the exit plane.
    pub z_cuts: Vec<f64>,
    pub emit: BTreeSet<Emit>,
    pub plot: bool,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            z_cuts: Vec::new(),
            emit: [Emit::Fields, Emit::Spectra, Emit::Transmission, Emit::Features, Emit::Diagnostics]
                .into_iter()
                .collect(),
            plot: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSettings {
    /// Half-width of the near-resonant window for features and extrema.
    pub window: f64,
    /// Transmission floor relative to the input peak.
    pub floor: f64,
    /// Node search start; defaults to three widths past the pulse peak.
    pub node_t_min: Option<f64>,
    /// Vacuum delay of the replica in the interference pipeline.
    pub tau1: f64,
    /// Detuning range of the dispersion pipeline.
    pub omega_max: f64,
    pub omega_points: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            floor: DEFAULT_FLOOR,
            node_t_min: None,
            tau1: 1.0,
            omega_max: 5.0,
            omega_points: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Prefix of every file this run writes.
    pub label: String,
    /// Inferred from `probe` when absent.
    pub pipeline: Option<Pipeline>,
    pub medium: MediumParams,
    pub pump: PulseSpec,
    pub probe: Option<PulseSpec>,
    pub geometry: BeamGeometry,
    pub solver: SolverConfig,
    pub grid: TimeGrid,
    pub analysis: AnalysisSettings,
    pub outputs: Outputs,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            label: "run".into(),
            pipeline: None,
            medium: MediumParams::default(),
            pump: PulseSpec {
                area: 0.49 * PI,
                spectral_fwhm: 10.0,
                detuning: 0.0,
                center_time: 3.0,
                delay: 0.0,
            },
            probe: None,
            geometry: BeamGeometry::default(),
            solver: SolverConfig::default(),
            grid: TimeGrid::default(),
            analysis: AnalysisSettings::default(),
            outputs: Outputs::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration is always serializable")
    }

    pub fn pipeline(&self) -> Pipeline {
        self.pipeline.unwrap_or(if self.probe.is_some() {
            Pipeline::PumpProbe
        } else {
            Pipeline::SingleBeam
        })
    }

    /// Depths reported by the run: the cuts and the exit plane, ascending.
    pub fn depths(&self) -> Vec<f64> {
        let mut z: Vec<f64> = self.outputs.z_cuts.iter().copied().chain([self.solver.z_max]).collect();
        z.sort_by(f64::total_cmp);
        z.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * self.solver.z_max);
        z
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.label.is_empty() || self.label.contains(['/', '\\']) {
            return Err(CliError::Config(format!("label {:?} is not a valid file prefix", self.label)));
        }
        self.medium.validate()?;
        self.grid.validate()?;
        self.solver.validate()?;
        self.geometry.validate()?;
        self.pump.validate()?;
        if let Some(probe) = &self.probe {
            probe.validate()?;
        }
        for &z in &self.outputs.z_cuts {
            if !(z > 0.0 && z <= self.solver.z_max * (1.0 + 1e-12)) {
                return Err(CliError::Config(format!(
                    "z cut {z} outside (0, {}]",
                    self.solver.z_max
                )));
            }
        }
        let a = &self.analysis;
        if !(a.window > 0.0 && a.floor > 0.0 && a.tau1.is_finite() && a.omega_max > 0.0 && a.omega_points >= 2) {
            return Err(CliError::Config("analysis settings out of range".into()));
        }
        match self.pipeline() {
            Pipeline::PumpProbe if self.probe.is_none() => {
                Err(CliError::Config("pump_probe pipeline needs a probe pulse".into()))
            }
            Pipeline::Interference if self.medium.gamma2 != 0.0 => Err(CliError::Config(
                "interference pipeline assumes gamma2 = 0".into(),
            )),
            _ => Ok(()),
        }
    }

    /// Applies `path=value` overrides, where `path` is dotted (`pump.delay`)
    /// and `value` is JSON (bare words are taken as strings).
    pub fn with_overrides(&self, overrides: &[(String, Value)]) -> CliResult<Self> {
        let mut doc = serde_json::to_value(self).expect("configuration is always serializable");
        for (path, value) in overrides {
            set_path(&mut doc, path, value.clone())?;
        }
        serde_json::from_value(doc).map_err(|e| CliError::Config(e.to_string()))
    }
}

fn set_path(doc: &mut Value, path: &str, value: Value) -> CliResult<()> {
    let mut node = doc;
    let mut keys = path.split('.').peekable();
    while let Some(key) = keys.next() {
        let map = node
            .as_object_mut()
            .ok_or_else(|| CliError::Config(format!("{path}: {key} is not inside an object")))?;
        if keys.peek().is_none() {
            if !map.contains_key(key) {
                return Err(CliError::Config(format!("{path}: unknown field {key}")));
            }
            map.insert(key.to_string(), value);
            return Ok(());
        }
        node = map
            .get_mut(key)
            .ok_or_else(|| CliError::Config(format!("{path}: unknown field {key}")))?;
    }
    Err(CliError::Config("empty override path".into()))
}

/// Parses `path=value`, reading `value` as JSON when possible.
pub fn parse_assignment(text: &str) -> CliResult<(String, Value)> {
    let (path, raw) = text
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("expected path=value, got {text:?}")))?;
    Ok((path.trim().to_string(), parse_value(raw.trim())))
}

/// Parses `path=v1,v2,...` into one path and its list of values.
pub fn parse_sweep_axis(text: &str) -> CliResult<(String, Vec<Value>)> {
    let (path, raw) = text
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("expected path=v1,v2,..., got {text:?}")))?;
    let values: Vec<Value> = raw.split(',').map(|v| parse_value(v.trim())).collect();
    if values.is_empty() || raw.trim().is_empty() {
        return Err(CliError::Config(format!("{path}: no values")));
    }
    Ok((path.trim().to_string(), values))
}

fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}
