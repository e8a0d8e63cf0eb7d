//! Marching the reduced Maxwell-Bloch system along the propagation axis.
//!
//! In the retarded frame `τ = t − z/c` the field equations lose their time
//! derivative. Two orderings of the same discretization are offered: RK4 in
//! `τ` with fields linear between samples, and a predictor-corrector in `z`.
//!
//! * [`MarchOrder::Characteristic`] advances every depth by one `τ` step
//!   before moving on. The polarization history lives in the medium state,
//!   so the `z` update only couples neighbouring depths at equal `τ`.
//! * [`MarchOrder::Slab`] integrates the whole `τ` window at one depth, then
//!   steps the field in `z`. Its `z` error grows with the window length, so
//!   near-resonant spectra in thick media need a much finer `dz`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::bloch::{step_full, step_pump, sweep_full, sweep_pump, ProbePoint, PumpPoint, StatePoint};
use crate::error::{Error, Result};
use crate::grid::{ComplexEnvelope, TimeGrid};
use crate::medium::{BeamGeometry, MediumParams};
use crate::pulse::pulse_area;

/// Largest `dz·ω_c/c` accepted without a warning.
pub const MAX_QUIET_DZ: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BlochIntegrator {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum FieldCorrector {
    Euler,
    #[default]
    Heun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MarchOrder {
    /// `τ` outer, `z` inner.
    #[default]
    Characteristic,
    /// `z` outer, full `τ` sweeps inner.
    Slab,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Medium length in units of `c/ω_c`.
    pub z_max: f64,
    pub n_z: usize,
    pub bloch_integrator: BlochIntegrator,
    pub field_corrector: FieldCorrector,
    pub march_order: MarchOrder,
    /// Keep the `(1 − cos φ)∂τΩ₁` transport term of the tilted probe.
    pub include_probe_drift: bool,
    /// Pump areas at or above this value are flagged.
    pub pump_area_guard: f64,
    /// Depths at which envelopes are recorded, besides the input and output planes.
    pub snapshots: Vec<f64>,
    /// Also record the medium state at every snapshot.
    pub record_states: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            z_max: 1.0,
            n_z: 100,
            bloch_integrator: BlochIntegrator::Rk4,
            field_corrector: FieldCorrector::Heun,
            march_order: MarchOrder::Characteristic,
            include_probe_drift: false,
            pump_area_guard: FRAC_PI_2,
            snapshots: Vec::new(),
            record_states: false,
        }
    }
}

impl SolverConfig {
    /// Default solver for a medium of length `z_max`, with `dz = 0.01`.
    pub fn for_length(z_max: f64) -> Self {
        Self {
            z_max,
            n_z: ((z_max / 0.01).round() as usize).max(1),
            ..Self::default()
        }
    }

    pub fn dz(&self) -> f64 {
        self.z_max / self.n_z as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.z_max.is_finite() && self.z_max > 0.0) {
            return Err(Error::InvalidParameter(format!("z_max must be positive, got {}", self.z_max)));
        }
        if self.n_z == 0 {
            return Err(Error::InvalidParameter("n_z must be at least 1".into()));
        }
        if !(self.pump_area_guard > 0.0) {
            return Err(Error::InvalidParameter("pump_area_guard must be positive".into()));
        }
        for &z in &self.snapshots {
            if !(0.0..=self.z_max * (1.0 + 1e-12)).contains(&z) {
                return Err(Error::InvalidParameter(format!(
                    "snapshot depth {z} outside [0, {}]",
                    self.z_max
                )));
            }
        }
        Ok(())
    }

    /// Non-fatal concerns about the step size.
    pub fn warnings(&self, medium: &MediumParams) -> Vec<String> {
        let mut out = Vec::new();
        if self.dz() * medium.omega_c > MAX_QUIET_DZ {
            out.push(format!(
                "dz·omega_c = {:.4} exceeds {MAX_QUIET_DZ}",
                self.dz() * medium.omega_c
            ));
        }
        out
    }

    fn snapshot_steps(&self) -> Vec<usize> {
        let dz = self.dz();
        let mut steps: Vec<usize> = self
            .snapshots
            .iter()
            .map(|&z| ((z / dz).round() as usize).min(self.n_z))
            .chain([0, self.n_z])
            .collect();
        steps.sort_unstable();
        steps.dedup();
        steps
    }
}

/// Medium variables sampled over `τ` at one depth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MediumState {
    pub z: f64,
    pub p0: Vec<Complex64>,
    pub p1: Vec<Complex64>,
    pub pm1_conj: Vec<Complex64>,
    pub d0: Vec<f64>,
    pub d1: Vec<Complex64>,
}

impl MediumState {
    fn with_len(z: f64, n: usize) -> Self {
        let zeros = vec![Complex64::new(0.0, 0.0); n];
        Self {
            z,
            p0: zeros.clone(),
            p1: zeros.clone(),
            pm1_conj: zeros.clone(),
            d0: vec![0.0; n],
            d1: zeros,
        }
    }

    fn set(&mut self, j: usize, s: &StatePoint) {
        self.p0[j] = s.pump.p0;
        self.d0[j] = s.pump.d0;
        self.p1[j] = s.probe.p1;
        self.pm1_conj[j] = s.probe.pm1_conj;
        self.d1[j] = s.probe.d1;
    }
}

/// Running checks accumulated over every `(τ, z)` point visited.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SolverDiagnostics {
    /// `max | |p₀|² + D₀² − (D^eq)² |`.
    pub max_bloch_norm_drift: f64,
    /// Lowest `D₀` encountered (negative means inversion).
    pub min_d0: f64,
    /// Completed `z` steps.
    pub steps: usize,
}

/// Envelopes recorded along the medium.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub z_samples: Vec<f64>,
    pub pump_fields: Vec<ComplexEnvelope>,
    /// Empty for single-beam runs.
    pub probe_fields: Vec<ComplexEnvelope>,
    pub states: Option<Vec<MediumState>>,
    pub diagnostics: SolverDiagnostics,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn pump_output(&self) -> &ComplexEnvelope {
        self.pump_fields.last().expect("trajectory always holds the output plane")
    }

    pub fn probe_output(&self) -> Option<&ComplexEnvelope> {
        self.probe_fields.last()
    }

    /// Index of the recorded depth closest to `z`.
    pub fn nearest(&self, z: f64) -> usize {
        self.z_samples
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - z).abs().total_cmp(&(b.1 - z).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0)
    }
}

fn check_inputs(env: &ComplexEnvelope, grid: &TimeGrid, medium: &MediumParams, config: &SolverConfig) -> Result<()> {
    medium.validate()?;
    config.validate()?;
    grid.validate()?;
    if !env.grid.same_as(grid) {
        return Err(Error::GridMismatch("input envelope is not sampled on the solver grid".into()));
    }
    Ok(())
}

fn area_warnings(pump: &ComplexEnvelope, config: &SolverConfig, medium: &MediumParams) -> Vec<String> {
    let mut out = config.warnings(medium);
    let area = pulse_area(pump).norm();
    if area >= config.pump_area_guard {
        out.push(format!(
            "pump area {area:.4} reaches the guard {:.4}; the medium may be inverted",
            config.pump_area_guard
        ));
    }
    out
}

fn causal_input(env: &ComplexEnvelope) -> Vec<Complex64> {
    let mut samples = env.samples.clone();
    let first = env.grid.first_causal_index().unwrap_or(env.grid.n);
    for s in &mut samples[..first] {
        *s = ZERO;
    }
    samples
}

fn non_finite(fields: &[Complex64]) -> Option<usize> {
    fields.iter().position(|v| !v.is_finite())
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Probe transport coefficients: `c·cosφ·∂ζΩ₁ + drift·∂τΩ₁ = −ω_c²p₁`.
#[derive(Clone, Copy)]
struct ProbeTransport {
    cos_phi: f64,
    drift: f64,
}

struct Diagnostics {
    inner: SolverDiagnostics,
    d_eq: f64,
}

impl Diagnostics {
    fn new(medium: &MediumParams) -> Self {
        Self {
            inner: SolverDiagnostics {
                min_d0: medium.d_eq,
                ..Default::default()
            },
            d_eq: medium.d_eq,
        }
    }

    fn visit(&mut self, s: &PumpPoint) {
        let drift = (s.bloch_norm() - self.d_eq * self.d_eq).abs();
        self.inner.max_bloch_norm_drift = self.inner.max_bloch_norm_drift.max(drift);
        self.inner.min_d0 = self.inner.min_d0.min(s.d0);
    }
}

struct Recording {
    z_samples: Vec<f64>,
    pump: Vec<Vec<Complex64>>,
    probe: Vec<Vec<Complex64>>,
    states: Option<Vec<MediumState>>,
}

impl Recording {
    fn new(config: &SolverConfig, nodes: &[usize], n: usize, with_probe: bool) -> Self {
        let dz = config.dz();
        let z_samples: Vec<f64> = nodes.iter().map(|&k| k as f64 * dz).collect();
        let blank = vec![ZERO; n];
        Self {
            pump: vec![blank.clone(); nodes.len()],
            probe: if with_probe { vec![blank; nodes.len()] } else { Vec::new() },
            states: config
                .record_states
                .then(|| z_samples.iter().map(|&z| MediumState::with_len(z, n)).collect()),
            z_samples,
        }
    }

    fn finish(self, grid: &TimeGrid, diag: SolverDiagnostics, warnings: Vec<String>) -> Result<Trajectory> {
        let wrap = |v: Vec<Vec<Complex64>>| -> Result<Vec<ComplexEnvelope>> {
            v.into_iter().map(|s| ComplexEnvelope::new(*grid, s)).collect()
        };
        Ok(Trajectory {
            z_samples: self.z_samples,
            pump_fields: wrap(self.pump)?,
            probe_fields: wrap(self.probe)?,
            states: self.states,
            diagnostics: diag,
            warnings,
        })
    }
}

/// Propagates a single pump beam through the medium.
pub fn simulate_single_beam(
    pulse_in: &ComplexEnvelope,
    medium: &MediumParams,
    config: &SolverConfig,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    check_inputs(pulse_in, grid, medium, config)?;
    let warnings = area_warnings(pulse_in, config, medium);
    for w in &warnings {
        log::warn!("{w}");
    }
    let pump = causal_input(pulse_in);
    let (rec, diag) = match config.march_order {
        MarchOrder::Characteristic => march_characteristic(&pump, None, medium, config, grid)?,
        MarchOrder::Slab => march_slab(&pump, None, medium, config, grid)?,
    };
    rec.finish(grid, diag, warnings)
}

/// Propagates a strong pump and a weak probe crossing it at `geometry.angle`.
///
/// The probe is treated to first order, so its output is linear in
/// `probe_in`, and the pump evolves exactly as in [`simulate_single_beam`].
pub fn simulate_pump_probe(
    pump_in: &ComplexEnvelope,
    probe_in: &ComplexEnvelope,
    geometry: &BeamGeometry,
    medium: &MediumParams,
    config: &SolverConfig,
    grid: &TimeGrid,
) -> Result<Trajectory> {
    check_inputs(pump_in, grid, medium, config)?;
    check_inputs(probe_in, grid, medium, config)?;
    geometry.validate()?;
    let warnings = area_warnings(pump_in, config, medium);
    for w in &warnings {
        log::warn!("{w}");
    }
    let cos_phi = geometry.angle.cos();
    let transport = ProbeTransport {
        cos_phi,
        drift: if config.include_probe_drift { 1.0 - cos_phi } else { 0.0 },
    };
    let pump = causal_input(pump_in);
    let probe = causal_input(probe_in);
    let (rec, diag) = match config.march_order {
        MarchOrder::Characteristic => march_characteristic(&pump, Some((&probe, transport)), medium, config, grid)?,
        MarchOrder::Slab => march_slab(&pump, Some((&probe, transport)), medium, config, grid)?,
    };
    rec.finish(grid, diag, warnings)
}

type ProbeInput<'a> = Option<(&'a [Complex64], ProbeTransport)>;

/// Adams-Moulton weights in `z`, newest node first, by available history.
const ADAMS_MOULTON: [&[f64]; 3] = [
    &[0.5, 0.5],
    &[5.0 / 12.0, 8.0 / 12.0, -1.0 / 12.0],
    &[9.0 / 24.0, 19.0 / 24.0, -5.0 / 24.0, 1.0 / 24.0],
];

fn am_weights(k: usize) -> &'static [f64] {
    ADAMS_MOULTON[k.min(3) - 1]
}

/// Polynomial extrapolation to node `k` from up to three upstream nodes.
fn extrapolate(v: &[Complex64], k: usize) -> Complex64 {
    match k {
        1 => v[0],
        2 => v[1] * 2.0 - v[0],
        _ => v[k - 1] * 3.0 - v[k - 2] * 3.0 + v[k - 3],
    }
}

/// `Σ_{i≥1} w_i r_{k−i}`, the explicit part of the Adams-Moulton sum.
fn history(w: &[f64], rates: &[Complex64], k: usize) -> Complex64 {
    w.iter().enumerate().skip(1).map(|(i, wi)| rates[k - i] * *wi).sum()
}

fn march_characteristic(
    pump_in: &[Complex64],
    probe_in: ProbeInput<'_>,
    medium: &MediumParams,
    config: &SolverConfig,
    grid: &TimeGrid,
) -> Result<(Recording, SolverDiagnostics)> {
    let n = grid.n;
    let dt = grid.dt;
    let nz = config.n_z;
    let dz = config.dz();
    let wc2 = medium.omega_c * medium.omega_c;
    let heun = config.field_corrector == FieldCorrector::Heun;
    let nodes = config.snapshot_steps();
    let mut rec = Recording::new(config, &nodes, n, probe_in.is_some());
    let mut diag = Diagnostics::new(medium);
    let transport = probe_in.map(|(_, t)| t);

    let probe_at = |j: usize| probe_in.map_or(ZERO, |(p, _)| p[j]);
    let step = |y: StatePoint, a: (Complex64, Complex64), b: (Complex64, Complex64)| -> StatePoint {
        if probe_in.is_some() {
            step_full(y, dt, a, b, medium)
        } else {
            StatePoint {
                pump: step_pump(y.pump, dt, a.0, b.0, medium),
                probe: y.probe,
            }
        }
    };

    let equilibrium = StatePoint::equilibrium(medium);
    let mut state = vec![equilibrium; nz + 1];
    let mut next_state = state.clone();
    let mut fields = vec![(pump_in[0], probe_at(0)); nz + 1];
    let mut next_fields = fields.clone();
    // z-derivatives of the fields at the new τ, per node
    let mut pump_rate = vec![ZERO; nz + 1];
    let mut probe_rate = vec![ZERO; nz + 1];

    let record = |rec: &mut Recording, j: usize, fields: &[(Complex64, Complex64)], state: &[StatePoint]| {
        for (s, &k) in nodes.iter().enumerate() {
            rec.pump[s][j] = fields[k].0;
            if let Some(p) = rec.probe.get_mut(s) {
                p[j] = fields[k].1;
            }
            if let Some(states) = rec.states.as_mut() {
                states[s].set(j, &state[k]);
            }
        }
    };
    record(&mut rec, 0, &fields, &state);

    for j in 1..n {
        next_fields[0] = (pump_in[j], probe_at(j));
        next_state[0] = step(state[0], fields[0], next_fields[0]);
        diag.visit(&next_state[0].pump);
        let set_rates = |k: usize, y: &StatePoint, f: (Complex64, Complex64), pr: &mut [Complex64], qr: &mut [Complex64]| {
            pr[k] = -wc2 * y.pump.p0;
            if let Some(t) = transport {
                qr[k] = (-wc2 * y.probe.p1 - (f.1 - fields[k].1) * (t.drift / dt)) / t.cos_phi;
            }
        };
        set_rates(0, &next_state[0], next_fields[0], &mut pump_rate, &mut probe_rate);

        for k in 1..=nz {
            let w = am_weights(k);
            let up = next_fields[k - 1];
            let pump_hist = history(w, &pump_rate, k);
            let probe_hist = history(w, &probe_rate, k);
            // predictor: extrapolated rates at the new node
            let mut f = (
                up.0 + (pump_hist + extrapolate(&pump_rate, k) * w[0]) * dz,
                up.1 + (probe_hist + extrapolate(&probe_rate, k) * w[0]) * dz,
            );
            let mut y = step(state[k], fields[k], f);
            if heun {
                diag.visit(&y.pump);
                let pump = up.0 + (pump_hist - wc2 * y.pump.p0 * w[0]) * dz;
                let probe = match transport {
                    None => ZERO,
                    Some(t) => {
                        // drift term is implicit in the new probe value
                        let r = t.drift / dt;
                        let explicit = (-wc2 * y.probe.p1 + fields[k].1 * r) / t.cos_phi;
                        (up.1 + (probe_hist + explicit * w[0]) * dz) / (1.0 + w[0] * dz * r / t.cos_phi)
                    }
                };
                f = (pump, probe);
                y = step(state[k], fields[k], f);
            }
            diag.visit(&y.pump);
            next_fields[k] = f;
            next_state[k] = y;
            set_rates(k, &y, f, &mut pump_rate, &mut probe_rate);
        }
        if let Some(k) = next_fields.iter().position(|f| !(f.0.is_finite() && f.1.is_finite())) {
            return Err(Error::Divergence {
                step: k,
                z: k as f64 * dz,
                detail: format!("field non-finite at tau sample {j}"),
            });
        }
        std::mem::swap(&mut state, &mut next_state);
        std::mem::swap(&mut fields, &mut next_fields);
        record(&mut rec, j, &fields, &state);
    }
    diag.inner.steps = nz;
    Ok((rec, diag.inner))
}

// Ω ← Ω + h·slope
fn field_update(base: &[Complex64], slope: &[Complex64], h: f64) -> Vec<Complex64> {
    base.iter().zip(slope).map(|(f, s)| f + s * h).collect()
}

fn mean(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    a.iter().zip(b).map(|(x, y)| (x + y) * 0.5).collect()
}

fn march_slab(
    pump_in: &[Complex64],
    probe_in: ProbeInput<'_>,
    medium: &MediumParams,
    config: &SolverConfig,
    grid: &TimeGrid,
) -> Result<(Recording, SolverDiagnostics)> {
    let dt = grid.dt;
    let dz = config.dz();
    let wc2 = medium.omega_c * medium.omega_c;
    let nodes = config.snapshot_steps();
    let mut rec = Recording::new(config, &nodes, grid.n, probe_in.is_some());
    let mut diag = Diagnostics::new(medium);

    let sweep = |pump: &[Complex64], probe: &[Complex64]| -> Vec<StatePoint> {
        if probe_in.is_some() {
            sweep_full(pump, probe, dt, medium)
        } else {
            sweep_pump(pump, dt, medium)
                .into_iter()
                .map(|pump| StatePoint {
                    pump,
                    probe: ProbePoint::default(),
                })
                .collect()
        }
    };
    let pump_slope = |state: &[StatePoint]| -> Vec<Complex64> { state.iter().map(|s| -wc2 * s.pump.p0).collect() };
    // first-order upwind for the drift term
    let probe_slope = |state: &[StatePoint], field: &[Complex64]| -> Vec<Complex64> {
        let Some((_, t)) = probe_in else {
            return vec![ZERO; field.len()];
        };
        (0..field.len())
            .map(|j| {
                let mut rhs = -wc2 * state[j].probe.p1;
                if t.drift != 0.0 {
                    let back = if j > 0 { field[j - 1] } else { ZERO };
                    rhs -= t.drift * (field[j] - back) / dt;
                }
                rhs / t.cos_phi
            })
            .collect()
    };

    let mut pump = pump_in.to_vec();
    let mut probe = probe_in.map_or_else(|| vec![ZERO; grid.n], |(p, _)| p.to_vec());
    let mut slot = 0;
    for step in 0..=config.n_z {
        let z = step as f64 * dz;
        let state = sweep(&pump, &probe);
        state.iter().for_each(|s| diag.visit(&s.pump));
        if nodes.get(slot) == Some(&step) {
            rec.pump[slot].copy_from_slice(&pump);
            if let Some(p) = rec.probe.get_mut(slot) {
                p.copy_from_slice(&probe);
            }
            if let Some(states) = rec.states.as_mut() {
                for (j, s) in state.iter().enumerate() {
                    states[slot].set(j, s);
                }
            }
            slot += 1;
        }
        if step == config.n_z {
            break;
        }
        let k1_pump = pump_slope(&state);
        let k1_probe = probe_slope(&state, &probe);
        let mut next_pump = field_update(&pump, &k1_pump, dz);
        let mut next_probe = field_update(&probe, &k1_probe, dz);
        if config.field_corrector == FieldCorrector::Heun {
            let predicted = sweep(&next_pump, &next_probe);
            predicted.iter().for_each(|s| diag.visit(&s.pump));
            next_pump = field_update(&pump, &mean(&k1_pump, &pump_slope(&predicted)), dz);
            next_probe = field_update(&probe, &mean(&k1_probe, &probe_slope(&predicted, &next_probe)), dz);
        }
        for (fields, which) in [(&next_pump, "pump"), (&next_probe, "probe")] {
            if let Some(j) = non_finite(fields) {
                return Err(Error::Divergence {
                    step: step + 1,
                    z: z + dz,
                    detail: format!("{which} field non-finite at tau sample {j}"),
                });
            }
        }
        pump = next_pump;
        probe = next_probe;
        diag.inner.steps += 1;
    }
    Ok((rec, diag.inner))
}
