//! Uniform retarded-time grids and complex field envelopes sampled on them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default step `dt·ω_c`.
pub const DEFAULT_DT: f64 = 0.05;
/// Default number of samples (window `409.6/ω_c`).
pub const DEFAULT_N: usize = 1 << 13;

/// Uniform grid `t_j = t_start + j·dt`, `j = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_start: f64,
    pub dt: f64,
    pub n: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            dt: DEFAULT_DT,
            n: DEFAULT_N,
        }
    }
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, n: usize) -> Result<Self> {
        let grid = Self { t_start, dt, n };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Grid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n < 2 {
            return Err(Error::Grid(format!("need at least two samples, got {}", self.n)));
        }
        if !self.t_start.is_finite() {
            return Err(Error::Grid("t_start must be finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn time(&self, j: usize) -> f64 {
        self.t_start + j as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.time(j))
    }

    /// Last sample time.
    pub fn t_end(&self) -> f64 {
        self.time(self.n - 1)
    }

    pub fn duration(&self) -> f64 {
        self.n as f64 * self.dt
    }

    /// Largest representable detuning, `π/dt`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.dt
    }

    /// Index of the first sample with `t >= 0`, if any.
    pub fn first_causal_index(&self) -> Option<usize> {
        if self.t_start >= 0.0 {
            return Some(0);
        }
        let j = (-self.t_start / self.dt).ceil() as usize;
        // guard against rounding just below zero
        let j = if self.time(j) < 0.0 { j + 1 } else { j };
        (j < self.n).then_some(j)
    }

    /// Same window and origin, half the step.
    pub fn refined(&self) -> Self {
        Self {
            t_start: self.t_start,
            dt: self.dt / 2.0,
            n: self.n * 2,
        }
    }

    pub fn same_as(&self, other: &TimeGrid) -> bool {
        self.n == other.n
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
            && (self.t_start - other.t_start).abs() <= 1e-12 * self.dt.max(self.t_start.abs())
    }
}

/// Complex field samples (Rabi-frequency units) on a [`TimeGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexEnvelope {
    pub grid: TimeGrid,
    pub samples: Vec<Complex64>,
}

impl ComplexEnvelope {
    pub fn new(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Self> {
        grid.validate()?;
        if samples.len() != grid.n {
            return Err(Error::Grid(format!(
                "expected {} samples, got {}",
                grid.n,
                samples.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: TimeGrid) -> Self {
        Self {
            grid,
            samples: vec![Complex64::new(0.0, 0.0); grid.n],
        }
    }

    /// Samples `f(t_j)` on the grid.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let samples = grid.times().map(f).collect();
        Self { grid, samples }
    }

    /// Unit-area impulse concentrated in a single sample.
    pub fn impulse(grid: TimeGrid, index: usize) -> Result<Self> {
        if index >= grid.n {
            return Err(Error::OutOfRange(format!(
                "impulse index {index} beyond grid of {} samples",
                grid.n
            )));
        }
        let mut env = Self::zeros(grid);
        env.samples[index] = Complex64::new(1.0 / grid.dt, 0.0);
        Ok(env)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.grid.times()
    }

    pub fn abs(&self) -> Vec<f64> {
        self.samples.iter().map(|c| c.norm()).collect()
    }

    /// Zero every sample with `t < 0`.
    pub fn enforce_causality(&mut self) {
        let first = self.grid.first_causal_index().unwrap_or(self.grid.n);
        for s in &mut self.samples[..first] {
            *s = Complex64::new(0.0, 0.0);
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            samples: self.samples.iter().map(|s| s * c).collect(),
        }
    }

    pub fn try_add(&self, other: &ComplexEnvelope) -> Result<Self> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch("envelopes live on different grids".into()));
        }
        Ok(Self {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// `‖self − reference‖₂ / ‖reference‖₂` over the shared grid.
    pub fn relative_l2_error(&self, reference: &ComplexEnvelope) -> Result<f64> {
        if !self.grid.same_as(&reference.grid) {
            return Err(Error::GridMismatch("envelopes live on different grids".into()));
        }
        let (mut num, mut den) = (0.0, 0.0);
        for (a, b) in self.samples.iter().zip(&reference.samples) {
            num += (a - b).norm_sqr();
            den += b.norm_sqr();
        }
        if den == 0.0 {
            return Ok(if num == 0.0 { 0.0 } else { f64::INFINITY });
        }
        Ok((num / den).sqrt())
    }

    /// Linear interpolation at an arbitrary time; zero outside the grid.
    pub fn interpolate(&self, t: f64) -> Complex64 {
        let x = (t - self.grid.t_start) / self.grid.dt;
        if x < 0.0 || x > (self.grid.n - 1) as f64 {
            return Complex64::new(0.0, 0.0);
        }
        let j = (x.floor() as usize).min(self.grid.n - 2);
        let f = x - j as f64;
        self.samples[j] * (1.0 - f) + self.samples[j + 1] * f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_basics() {
        let g = TimeGrid::default();
        assert_eq!(g.n, 8192);
        assert!((g.duration() - 409.6).abs() < 1e-9);
        assert!(g.nyquist() > 62.8);
        assert!(TimeGrid::new(0.0, 0.0, 16).is_err());
        assert!(TimeGrid::new(0.0, 0.1, 1).is_err());
    }

    #[test]
    fn first_causal_index() {
        let g = TimeGrid::new(-1.0, 0.25, 16).unwrap();
        assert_eq!(g.first_causal_index(), Some(4));
        assert_eq!(g.time(4), 0.0);
        let g = TimeGrid::new(-1.1, 0.25, 16).unwrap();
        assert_eq!(g.first_causal_index(), Some(5));
        let g = TimeGrid::new(-10.0, 0.25, 16).unwrap();
        assert_eq!(g.first_causal_index(), None);
    }

    #[test]
    fn causality_zeroing() {
        let g = TimeGrid::new(-1.0, 0.5, 8).unwrap();
        let mut env = ComplexEnvelope::from_fn(g, |_| Complex64::new(1.0, 1.0));
        env.enforce_causality();
        assert_eq!(env.samples[0], Complex64::new(0.0, 0.0));
        assert_eq!(env.samples[1], Complex64::new(0.0, 0.0));
        assert_eq!(env.samples[2], Complex64::new(1.0, 1.0));
    }

    #[test]
    fn sample_count_checked() {
        let g = TimeGrid::new(0.0, 0.5, 8).unwrap();
        assert!(ComplexEnvelope::new(g, vec![Complex64::new(0.0, 0.0); 7]).is_err());
    }

    #[test]
    fn interpolation() {
        let g = TimeGrid::new(0.0, 1.0, 3).unwrap();
        let env = ComplexEnvelope::new(
            g,
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, -2.0),
                Complex64::new(4.0, 0.0),
            ],
        )
        .unwrap();
        assert_eq!(env.interpolate(0.5), Complex64::new(1.0, -1.0));
        assert_eq!(env.interpolate(2.0), Complex64::new(4.0, 0.0));
        assert_eq!(env.interpolate(-0.1), Complex64::new(0.0, 0.0));
    }
}
