//! Discrete spectra under the convention `F(ω) = ∫Ω(τ)e^{−iωτ}dτ`,
//! `Ω(τ) = (1/2π)∫F(ω)e^{iωτ}dω`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft;
use crate::grid::{ComplexEnvelope, TimeGrid};

/// Complex amplitudes on the ascending detuning grid `ω_m = omega_start + m·domega`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub omega_start: f64,
    pub domega: f64,
    pub n: usize,
    pub values: Vec<Complex64>,
}

impl Spectrum {
    pub fn omega(&self, m: usize) -> f64 {
        self.omega_start + m as f64 * self.domega
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |m| self.omega(m))
    }

    pub fn abs(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm()).collect()
    }

    /// Index of the bin sitting at `ω = 0`, when the grid has one.
    pub fn zero_bin(&self) -> Option<usize> {
        let x = -self.omega_start / self.domega;
        let m = x.round();
        ((x - m).abs() < 1e-9 && m >= 0.0 && (m as usize) < self.n).then_some(m as usize)
    }

    pub fn same_grid(&self, other: &Spectrum) -> bool {
        self.n == other.n
            && (self.domega - other.domega).abs() <= 1e-12 * self.domega
            && (self.omega_start - other.omega_start).abs() <= 1e-9 * self.domega
    }

    /// Linear interpolation between bins.
    pub fn interpolate(&self, omega: f64) -> Result<Complex64> {
        let x = (omega - self.omega_start) / self.domega;
        if !(0.0..=(self.n - 1) as f64).contains(&x) {
            return Err(Error::OutOfRange(format!(
                "omega = {omega} outside spectrum grid [{}, {}]",
                self.omega_start,
                self.omega(self.n - 1)
            )));
        }
        let m = (x.floor() as usize).min(self.n - 2);
        let f = x - m as f64;
        Ok(self.values[m] * (1.0 - f) + self.values[m + 1] * f)
    }

    /// `(1/2π)Σ|F|²dω`, the spectral side of Parseval's identity.
    pub fn energy(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.domega / (2.0 * PI)
    }

    /// Inverse transform back onto `grid`, which must match this spectrum's
    /// sample count and step.
    pub fn to_envelope(&self, grid: &TimeGrid) -> Result<ComplexEnvelope> {
        let dt = 2.0 * PI / (self.n as f64 * self.domega);
        if grid.n != self.n || (grid.dt - dt).abs() > 1e-9 * dt {
            return Err(Error::GridMismatch(format!(
                "spectrum of {} bins (dt = {dt}) cannot be inverted onto a grid of {} samples with dt = {}",
                self.n, grid.n, grid.dt
            )));
        }
        let n = self.n;
        let half = n / 2;
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (m, v) in self.values.iter().enumerate() {
            let omega = self.omega(m);
            let k = (m + n - half) % n;
            buf[k] = v * Complex64::from_polar(1.0 / grid.dt, omega * grid.t_start);
        }
        fft::inverse(&mut buf);
        ComplexEnvelope::new(*grid, buf)
    }
}

/// Discrete transform `F(ω) = Σ_j Ω(τ_j)e^{−iωτ_j}dt` on the folded DFT grid,
/// phase referenced to `τ = 0`.
pub fn spectrum(env: &ComplexEnvelope) -> Spectrum {
    let n = env.grid.n;
    let dt = env.grid.dt;
    let half = n / 2;
    let domega = 2.0 * PI / (n as f64 * dt);
    let mut buf = env.samples.clone();
    fft::forward(&mut buf);
    let omega_start = -(half as f64) * domega;
    let values = (0..n)
        .map(|m| {
            let k = (m + n - half) % n;
            let omega = omega_start + m as f64 * domega;
            buf[k] * Complex64::from_polar(dt, -omega * env.grid.t_start)
        })
        .collect();
    Spectrum {
        omega_start,
        domega,
        n,
        values,
    }
}

/// Detunings of the local extrema of `|F(ω)|` within `|ω| ≤ window` whose
/// magnitude reaches `threshold`.
///
/// Counts the oscillating structure of an output spectrum; the threshold keeps
/// round-off ripple in empty bins out of the count.
pub fn spectral_extrema(spec: &Spectrum, window: f64, threshold: f64) -> Vec<f64> {
    let a = spec.abs();
    (1..a.len().saturating_sub(1))
        .filter(|&m| spec.omega(m).abs() <= window && a[m] >= threshold)
        .filter(|&m| (a[m] > a[m - 1] && a[m] > a[m + 1]) || (a[m] < a[m - 1] && a[m] < a[m + 1]))
        .map(|m| spec.omega(m))
        .collect()
}
