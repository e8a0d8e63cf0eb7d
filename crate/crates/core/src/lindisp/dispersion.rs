//! Linear dispersion of the dense resonant medium.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Default factor by which `ω_D` must exceed `γ₂` for ringing to count as observable.
pub const DEFAULT_RINGING_MARGIN: f64 = 10.0;

/// `c·k(ω)` at one detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionSample {
    pub omega: f64,
    pub ck: Complex64,
}

/// Regime flags of the medium at a given depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingDiagnostics {
    pub omega_d: f64,
    pub strong_coupling: bool,
    pub ringing_observable: bool,
}

/// `c·k(ω) = ω − ω_c²/(ω − iγ₂)`, both measured from resonance.
pub fn wavevector(omega: f64, medium: &MediumParams) -> Result<Complex64> {
    let denom = Complex64::new(omega, -medium.gamma2);
    if denom.norm() == 0.0 {
        if medium.omega_c == 0.0 {
            return Ok(Complex64::new(omega, 0.0));
        }
        return Err(Error::Domain(
            "wavevector pole: omega = 0 with gamma2 = 0 (undamped resonance)".into(),
        ));
    }
    Ok(Complex64::new(omega, 0.0) - medium.omega_c * medium.omega_c / denom)
}

/// Samples the dispersion on a list of detunings.
pub fn dispersion_curve(omegas: &[f64], medium: &MediumParams) -> Result<Vec<DispersionSample>> {
    omegas
        .iter()
        .map(|&omega| {
            Ok(DispersionSample {
                omega,
                ck: wavevector(omega, medium)?,
            })
        })
        .collect()
}

/// Group velocity `V_g/c = (c·dRe k/dω)⁻¹`.
pub fn group_velocity(omega: f64, medium: &MediumParams) -> Result<f64> {
    let w2 = omega * omega;
    let g2 = medium.gamma2 * medium.gamma2;
    let wc2 = medium.omega_c * medium.omega_c;
    let lorentz = (w2 + g2) * (w2 + g2);
    let denom = lorentz + wc2 * (w2 - g2);
    let scale = lorentz + wc2 * (w2 + g2);
    if denom.abs() <= 1e-14 * scale || scale == 0.0 {
        return Err(Error::Domain(format!(
            "group velocity diverges at omega = {omega} (vanishing dispersion slope)"
        )));
    }
    Ok(1.0 - wc2 * (w2 - g2) / denom)
}

/// Magnitude of the linear field transmission `|exp(−i(ck − ω)z)|`.
pub fn linear_transmission(omega: f64, z: f64, medium: &MediumParams) -> f64 {
    let w2g2 = omega * omega + medium.gamma2 * medium.gamma2;
    if w2g2 == 0.0 {
        return if medium.omega_d(z) == 0.0 { 1.0 } else { 0.0 };
    }
    (-medium.omega_d(z) * medium.gamma2 / w2g2).exp()
}

pub fn coupling_diagnostics(medium: &MediumParams, z: f64, margin: f64) -> Result<CouplingDiagnostics> {
    if !(z.is_finite() && z >= 0.0) {
        return Err(Error::Domain(format!("z must be non-negative, got {z}")));
    }
    if !(margin.is_finite() && margin > 0.0) {
        return Err(Error::Domain(format!("margin must be positive, got {margin}")));
    }
    let omega_d = medium.omega_d(z);
    Ok(CouplingDiagnostics {
        omega_d,
        strong_coupling: medium.is_strongly_coupled(),
        ringing_observable: omega_d > margin * medium.gamma2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium(gamma2: f64) -> MediumParams {
        MediumParams::ground_state(1.0, gamma2)
    }

    #[test]
    fn wavevector_values() {
        let ck = wavevector(0.0, &medium(0.15)).unwrap();
        assert!(ck.re.abs() < 1e-15);
        assert!((ck.im + 6.666666666666667).abs() < 1e-12);

        let ck = wavevector(1.0, &medium(0.0)).unwrap();
        assert!(ck.norm() < 1e-15);

        let w = 1e3;
        let ck = wavevector(w, &medium(0.15)).unwrap();
        assert!((ck - w).norm() / w < 1.0 / (w * w));

        assert!(wavevector(0.0, &medium(0.0)).is_err());
        assert_eq!(
            wavevector(0.0, &MediumParams::vacuum()).unwrap(),
            Complex64::new(0.0, 0.0)
        );
    }

    #[test]
    fn absorptive_sign() {
        for &w in &[-3.0, -0.1, 0.0, 0.2, 5.0] {
            assert!(wavevector(w, &medium(0.15)).unwrap().im < 0.0);
        }
    }

    #[test]
    fn group_velocity_values() {
        let v = group_velocity(0.0, &medium(0.15)).unwrap();
        assert!((v + 0.0225 / (1.0 - 0.0225)).abs() < 1e-12);
        assert!((v + 0.023018).abs() < 1e-6);
        assert!((group_velocity(1.0, &medium(0.0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((group_velocity(1e4, &medium(0.15)).unwrap() - 1.0).abs() < 1e-7);
        assert!(group_velocity(0.0, &medium(0.0)).is_err());
    }

    #[test]
    fn group_velocity_matches_finite_difference() {
        let m = medium(0.15);
        let h = 1e-4;
        for &w in &[-4.0, -1.3, -0.6, 0.05, 0.4, 0.9, 2.2, 7.0] {
            let d = (wavevector(w + h, &m).unwrap().re - wavevector(w - h, &m).unwrap().re) / (2.0 * h);
            let v = group_velocity(w, &m).unwrap();
            assert!((1.0 / d - v).abs() < 1e-6 * v.abs(), "omega = {w}");
        }
    }

    #[test]
    fn transmission_line_center() {
        let m = medium(1e-3);
        assert!((linear_transmission(0.0, 1.0, &m) - (-1000f64).exp()).abs() < 1e-300);
        assert!((linear_transmission(50.0, 1.0, &m) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn diagnostics() {
        let d = coupling_diagnostics(&medium(1e-3), 1.0, DEFAULT_RINGING_MARGIN).unwrap();
        assert!((d.omega_d / 1e-3 - 1000.0).abs() < 1e-9);
        assert!(d.strong_coupling && d.ringing_observable);

        let d = coupling_diagnostics(&medium(1e-3), 0.0, DEFAULT_RINGING_MARGIN).unwrap();
        assert_eq!(d.omega_d, 0.0);
        assert!(!d.ringing_observable);

        let d = coupling_diagnostics(&medium(1.1), 1.0, DEFAULT_RINGING_MARGIN).unwrap();
        assert!(!d.strong_coupling);

        let a = coupling_diagnostics(&MediumParams::ground_state(2.0, 0.1), 3.0, 10.0).unwrap();
        let b = coupling_diagnostics(&MediumParams::ground_state(1.0, 0.1), 1.0, 10.0).unwrap();
        assert!((a.omega_d - 12.0 * b.omega_d).abs() < 1e-12);
    }
}
