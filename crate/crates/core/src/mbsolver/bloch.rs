//! Bloch equations for the pump harmonic and its first-order probe
//! perturbation, and a fixed-step RK4 sweep along retarded time.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::medium::MediumParams;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Pump-driven variables `(p₀, D₀)`. `D₀` is real by the `D_m = D_{−m}*` symmetry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpPoint {
    pub p0: Complex64,
    pub d0: f64,
}

/// First-order probe variables `(p₁, p₋₁*, D₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ProbePoint {
    pub p1: Complex64,
    pub pm1_conj: Complex64,
    pub d1: Complex64,
}

/// Full medium state at one `(τ, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatePoint {
    pub pump: PumpPoint,
    pub probe: ProbePoint,
}

impl PumpPoint {
    pub fn equilibrium(medium: &MediumParams) -> Self {
        Self { p0: ZERO, d0: medium.d_eq }
    }

    /// `|p₀|² + D₀²`, conserved when `γ₁ = γ₂ = 0`.
    pub fn bloch_norm(&self) -> f64 {
        self.p0.norm_sqr() + self.d0 * self.d0
    }
}

impl ProbePoint {
    pub const ZERO: Self = Self {
        p1: ZERO,
        pm1_conj: ZERO,
        d1: ZERO,
    };
}

impl StatePoint {
    pub fn equilibrium(medium: &MediumParams) -> Self {
        Self {
            pump: PumpPoint::equilibrium(medium),
            probe: ProbePoint::ZERO,
        }
    }
}

impl Add for PumpPoint {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            p0: self.p0 + o.p0,
            d0: self.d0 + o.d0,
        }
    }
}

impl Mul<f64> for PumpPoint {
    type Output = Self;
    #[inline]
    fn mul(self, h: f64) -> Self {
        Self {
            p0: self.p0 * h,
            d0: self.d0 * h,
        }
    }
}

impl Add for ProbePoint {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            p1: self.p1 + o.p1,
            pm1_conj: self.pm1_conj + o.pm1_conj,
            d1: self.d1 + o.d1,
        }
    }
}

impl Mul<f64> for ProbePoint {
    type Output = Self;
    #[inline]
    fn mul(self, h: f64) -> Self {
        Self {
            p1: self.p1 * h,
            pm1_conj: self.pm1_conj * h,
            d1: self.d1 * h,
        }
    }
}

impl Add for StatePoint {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self {
            pump: self.pump + o.pump,
            probe: self.probe + o.probe,
        }
    }
}

impl Mul<f64> for StatePoint {
    type Output = Self;
    #[inline]
    fn mul(self, h: f64) -> Self {
        Self {
            pump: self.pump * h,
            probe: self.probe * h,
        }
    }
}

/// Pump right-hand side: `ṗ₀ = Ω₀D₀ − γ₂p₀`, `Ḋ₀ = −½(Ω₀p₀* + Ω₀*p₀) − γ₁(D₀ − D^eq)`.
#[inline]
pub fn pump_derivatives(omega0: Complex64, s: &PumpPoint, medium: &MediumParams) -> PumpPoint {
    PumpPoint {
        p0: omega0 * s.d0 - s.p0 * medium.gamma2,
        // ½(Ω₀p₀* + Ω₀*p₀) = Re(Ω₀p₀*)
        d0: -(omega0 * s.p0.conj()).re - medium.gamma1 * (s.d0 - medium.d_eq),
    }
}

/// Probe right-hand side, linear in the probe variables and `Ω₁`.
#[inline]
pub fn probe_derivatives(
    omega0: Complex64,
    omega1: Complex64,
    pump: &PumpPoint,
    s: &ProbePoint,
    medium: &MediumParams,
) -> ProbePoint {
    ProbePoint {
        p1: omega1 * pump.d0 + omega0 * s.d1 - s.p1 * medium.gamma2,
        d1: -0.5 * (omega1 * pump.p0.conj() + omega0.conj() * s.p1 + omega0 * s.pm1_conj)
            - s.d1 * medium.gamma1,
        pm1_conj: omega0.conj() * s.d1 - s.pm1_conj * medium.gamma2,
    }
}

/// Right-hand sides of the coupled pump/probe Bloch system at one point.
pub fn bloch_derivatives(
    omega0: Complex64,
    omega1: Complex64,
    state: &StatePoint,
    medium: &MediumParams,
) -> StatePoint {
    StatePoint {
        pump: pump_derivatives(omega0, &state.pump, medium),
        probe: probe_derivatives(omega0, omega1, &state.pump, &state.probe, medium),
    }
}

#[inline]
fn rk4<S, F>(y: S, h: f64, f0: F, fm: F, f1: F, rhs: impl Fn(F, &S) -> S) -> S
where
    S: Copy + Add<Output = S> + Mul<f64, Output = S>,
    F: Copy,
{
    let k1 = rhs(f0, &y);
    let k2 = rhs(fm, &(y + k1 * (0.5 * h)));
    let k3 = rhs(fm, &(y + k2 * (0.5 * h)));
    let k4 = rhs(f1, &(y + k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// One RK4 step of the pump subsystem with the field linear across the step.
#[inline]
pub fn step_pump(y: PumpPoint, h: f64, omega_a: Complex64, omega_b: Complex64, medium: &MediumParams) -> PumpPoint {
    let mid = (omega_a + omega_b) * 0.5;
    rk4(y, h, omega_a, mid, omega_b, |w, s| pump_derivatives(w, s, medium))
}

/// One RK4 step of the full system with both fields linear across the step.
#[inline]
pub fn step_full(
    y: StatePoint,
    h: f64,
    fields_a: (Complex64, Complex64),
    fields_b: (Complex64, Complex64),
    medium: &MediumParams,
) -> StatePoint {
    let mid = ((fields_a.0 + fields_b.0) * 0.5, (fields_a.1 + fields_b.1) * 0.5);
    rk4(y, h, fields_a, mid, fields_b, |(w0, w1), s| {
        bloch_derivatives(w0, w1, s, medium)
    })
}

/// Integrates the pump subsystem over the whole τ grid, returning the state at every sample.
pub fn sweep_pump(omega0: &[Complex64], dt: f64, medium: &MediumParams) -> Vec<PumpPoint> {
    let mut out = Vec::with_capacity(omega0.len());
    let mut y = PumpPoint::equilibrium(medium);
    out.push(y);
    for w in omega0.windows(2) {
        y = step_pump(y, dt, w[0], w[1], medium);
        out.push(y);
    }
    out
}

/// Integrates the coupled system over the whole τ grid.
pub fn sweep_full(omega0: &[Complex64], omega1: &[Complex64], dt: f64, medium: &MediumParams) -> Vec<StatePoint> {
    debug_assert_eq!(omega0.len(), omega1.len());
    let mut out = Vec::with_capacity(omega0.len());
    let mut y = StatePoint::equilibrium(medium);
    out.push(y);
    for j in 1..omega0.len() {
        y = step_full(
            y,
            dt,
            (omega0[j - 1], omega1[j - 1]),
            (omega0[j], omega1[j]),
            medium,
        );
        out.push(y);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equilibrium_is_fixed_point() {
        let m = MediumParams::new(1.0, 0.1, 0.2, 0.8).unwrap();
        let d = bloch_derivatives(ZERO, ZERO, &StatePoint::equilibrium(&m), &m);
        assert_eq!(d, StatePoint { pump: PumpPoint { p0: ZERO, d0: 0.0 }, probe: ProbePoint::ZERO });
    }

    #[test]
    fn pump_alone_creates_no_probe() {
        let m = MediumParams::new(1.0, 0.1, 0.2, 1.0).unwrap();
        let s = StatePoint {
            pump: PumpPoint { p0: c(0.3, -0.2), d0: 0.7 },
            probe: ProbePoint::ZERO,
        };
        let d = bloch_derivatives(c(1.2, 0.4), ZERO, &s, &m);
        assert_eq!(d.probe, ProbePoint::ZERO);
    }

    #[test]
    fn derivative_formulas() {
        let m = MediumParams::new(1.0, 0.05, 0.1, 1.0).unwrap();
        let (w0, w1) = (c(0.7, 0.2), c(-0.1, 0.3));
        let s = StatePoint {
            pump: PumpPoint { p0: c(0.2, 0.1), d0: 0.9 },
            probe: ProbePoint { p1: c(0.01, 0.02), pm1_conj: c(-0.03, 0.01), d1: c(0.02, -0.01) },
        };
        let d = bloch_derivatives(w0, w1, &s, &m);
        let p0 = s.pump.p0;
        assert!((d.pump.p0 - (w0 * 0.9 - p0 * 0.1)).norm() < 1e-15);
        let d0 = -0.5 * (w0 * p0.conj() + w0.conj() * p0) - 0.05 * (0.9 - 1.0);
        assert!((d.pump.d0 - d0.re).abs() < 1e-15 && d0.im.abs() < 1e-15);
        let pr = s.probe;
        assert!((d.probe.p1 - (w1 * 0.9 + w0 * pr.d1 - pr.p1 * 0.1)).norm() < 1e-15);
        let d1 = -0.5 * (w1 * p0.conj() + w0.conj() * pr.p1 + w0 * pr.pm1_conj) - pr.d1 * 0.05;
        assert!((d.probe.d1 - d1).norm() < 1e-15);
        assert!((d.probe.pm1_conj - (w0.conj() * pr.d1 - pr.pm1_conj * 0.1)).norm() < 1e-15);
    }

    #[test]
    fn rabi_oscillation() {
        // constant real field, no damping: p₀ = sin(Ωt), D₀ = cos(Ωt)
        let m = MediumParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let rabi = 1.3;
        let n = 4000;
        let h = 2.0 * PI / rabi / n as f64;
        let field = vec![c(rabi, 0.0); n + 1];
        let states = sweep_pump(&field, h, &m);
        for (j, s) in states.iter().enumerate() {
            let t = j as f64 * h;
            assert!((s.p0 - c((rabi * t).sin(), 0.0)).norm() < 1e-8);
            assert!((s.d0 - (rabi * t).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn full_sweep_pump_part_matches_pump_sweep() {
        let m = MediumParams::new(1.0, 0.01, 0.02, 1.0).unwrap();
        let w0: Vec<_> = (0..500).map(|j| c((j as f64 * 0.01).sin(), 0.3 * (j as f64 * 0.02).cos())).collect();
        let w1: Vec<_> = (0..500).map(|j| c(1e-3 * (j as f64 * 0.05).cos(), 0.0)).collect();
        let a = sweep_pump(&w0, 0.05, &m);
        let b = sweep_full(&w0, &w1, 0.05, &m);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(*x, y.pump);
        }
    }
}
