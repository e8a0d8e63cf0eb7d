//! Gaussian input pulses and their integral characteristics.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ComplexEnvelope, TimeGrid};

/// Minimum ratio `t₀ / (2π/γ_sp)` below which the Heaviside cut visibly
/// truncates the leading edge.
pub const CENTER_TIME_MARGIN: f64 = 3.0;

/// Half-width, in units of `a`, that the grid must hold on each side of the
/// pulse centre.
const SUPPORT_HALF_WIDTH: f64 = 3.0;

/// Gaussian input pulse.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    /// Pulse area `s` (Rabi angle).
    pub area: f64,
    /// FWHM of `|F_in(ω)|`.
    pub spectral_fwhm: f64,
    /// Carrier detuning from resonance.
    pub detuning: f64,
    /// Centre time `t₀`.
    pub center_time: f64,
    /// Extra delay `τ₀`; negative values make this pulse lead the reference pulse.
    #[serde(default)]
    pub delay: f64,
}

impl PulseSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.spectral_fwhm.is_finite() && self.spectral_fwhm > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "spectral_fwhm must be positive, got {}",
                self.spectral_fwhm
            )));
        }
        if !(self.center_time.is_finite() && self.center_time > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "center_time must be positive, got {}",
                self.center_time
            )));
        }
        if !self.area.is_finite() || !self.detuning.is_finite() || !self.delay.is_finite() {
            return Err(Error::InvalidParameter("pulse parameters must be finite".into()));
        }
        Ok(())
    }

    /// Temporal width parameter `a` of the Gaussian.
    pub fn width(&self) -> Result<f64> {
        spectral_fwhm_to_a(self.spectral_fwhm)
    }

    /// Time of the envelope maximum, `t₀ + τ₀`.
    pub fn peak_time(&self) -> f64 {
        self.center_time + self.delay
    }

    /// Peak Rabi frequency `s / (a√π)`.
    pub fn peak_amplitude(&self) -> Result<f64> {
        Ok(self.area / (self.width()? * PI.sqrt()))
    }

    /// Non-fatal problems with this pulse (currently: leading-edge truncation).
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let min_center = CENTER_TIME_MARGIN * 2.0 * PI / self.spectral_fwhm;
        if self.center_time < min_center {
            out.push(format!(
                "center_time {} is below {:.4} = {}·2π/γ_sp; the step function truncates the pulse",
                self.center_time, min_center, CENTER_TIME_MARGIN
            ));
        }
        out
    }
}

/// Gaussian width parameter `a = 4√(ln 2)/γ_sp` for a spectral FWHM `γ_sp`.
pub fn spectral_fwhm_to_a(gamma_sp: f64) -> Result<f64> {
    if !(gamma_sp.is_finite() && gamma_sp > 0.0) {
        return Err(Error::Domain(format!(
            "spectral FWHM must be positive, got {gamma_sp}"
        )));
    }
    Ok(4.0 * 2f64.ln().sqrt() / gamma_sp)
}

/// Inverse of [`spectral_fwhm_to_a`].
pub fn a_to_spectral_fwhm(a: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::Domain(format!("pulse width must be positive, got {a}")));
    }
    Ok(4.0 * 2f64.ln().sqrt() / a)
}

/// Samples `s/(a√π)·exp(−((t − t₀ − τ₀)/a)²)·exp(iΔt)·θ(t)` on `grid`.
pub fn gaussian_pulse(spec: &PulseSpec, grid: &TimeGrid) -> Result<ComplexEnvelope> {
    spec.validate()?;
    grid.validate()?;
    let a = spec.width()?;
    let center = spec.peak_time();
    let lo = center - SUPPORT_HALF_WIDTH * a;
    let hi = center + SUPPORT_HALF_WIDTH * a;
    if lo < grid.t_start.max(0.0) - 1e-12 || hi > grid.t_end() {
        return Err(Error::Grid(format!(
            "pulse support [{lo:.4}, {hi:.4}] does not fit in the causal grid window [{:.4}, {:.4}]",
            grid.t_start.max(0.0),
            grid.t_end()
        )));
    }
    for w in spec.warnings() {
        log::warn!("{w}");
    }
    let peak = spec.area / (a * PI.sqrt());
    Ok(ComplexEnvelope::from_fn(*grid, |t| {
        if t < 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let u = (t - center) / a;
        Complex64::from_polar(peak * (-u * u).exp(), spec.detuning * t)
    }))
}

fn trapezoid<T>(values: &[T], dt: f64, f: impl Fn(&T) -> Complex64) -> Complex64 {
    match values {
        [] => Complex64::new(0.0, 0.0),
        [_] => Complex64::new(0.0, 0.0),
        [first, middle @ .., last] => {
            let inner: Complex64 = middle.iter().map(&f).sum();
            (inner + (f(first) + f(last)) * 0.5) * dt
        }
    }
}

/// Trapezoidal `∫Ω(τ)dτ`.
pub fn pulse_area(env: &ComplexEnvelope) -> Complex64 {
    trapezoid(&env.samples, env.grid.dt, |s| *s)
}

/// Trapezoidal `∫|Ω(τ)|²dτ`.
pub fn pulse_energy(env: &ComplexEnvelope) -> f64 {
    trapezoid(&env.samples, env.grid.dt, |s| Complex64::new(s.norm_sqr(), 0.0)).re
}
