//! Stationary-phase description of the ringing for `γ₂ = 0`, and the
//! spectrum of the ringing interfering with a vacuum-delayed replica.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analysis::Spectrum;
use crate::error::{Error, Result};
use crate::medium::MediumParams;

/// Frequency `ω_g = ω_c √(z/(cτ))` of the two wave packets whose group delay
/// equals `τ`.
pub fn stationary_frequency(tau: f64, z: f64, medium: &MediumParams) -> Result<f64> {
    if !(tau > 0.0 && z > 0.0) {
        return Err(Error::Domain(format!(
            "stationary frequency needs tau > 0 and z > 0, got tau = {tau}, z = {z}"
        )));
    }
    Ok(medium.omega_c * (z / tau).sqrt())
}

/// The two stationary-phase contributions at `(τ, z)`, in the order `(+ω_g, −ω_g)`.
pub fn stationary_terms(
    tau: f64,
    z: f64,
    spectrum_in: &Spectrum,
    medium: &MediumParams,
) -> Result<(Complex64, Complex64)> {
    if medium.gamma2 != 0.0 {
        return Err(Error::Domain(format!(
            "asymptotic field assumes gamma2 = 0, got {}",
            medium.gamma2
        )));
    }
    let omega_g = stationary_frequency(tau, z, medium)?;
    let phase = 2.0 * medium.omega_c * (z * tau).sqrt();
    let prefactor = phase.sqrt() / (2.0 * tau * (2.0 * PI).sqrt());
    let upper = spectrum_in.interpolate(omega_g)? * Complex64::from_polar(prefactor, phase + PI / 4.0);
    let lower = spectrum_in.interpolate(-omega_g)? * Complex64::from_polar(prefactor, -phase - PI / 4.0);
    Ok((upper, lower))
}

/// Large-`ω_c z/c` asymptote of the propagated field, built from the input
/// spectrum at `±ω_g`. `τ` is measured from the time origin of `spectrum_in`.
pub fn asymptotic_field(tau: f64, z: f64, spectrum_in: &Spectrum, medium: &MediumParams) -> Result<Complex64> {
    let (upper, lower) = stationary_terms(tau, z, spectrum_in, medium)?;
    Ok(upper + lower)
}

/// `|F₊(ω)| = 2|F_in(ω)|·|cos(½(ω_c²z/ω + ωτ₁))|` on the grid of `spectrum_in`.
/// The `ω = 0` bin is set to zero when the medium phase has a pole there.
pub fn interference_spectrum(
    spectrum_in: &Spectrum,
    z: f64,
    tau1: f64,
    medium: &MediumParams,
) -> Result<Vec<f64>> {
    if medium.gamma2 != 0.0 {
        return Err(Error::Domain(format!(
            "interference spectrum assumes gamma2 = 0, got {}",
            medium.gamma2
        )));
    }
    let strength = medium.omega_d(z);
    let mut warned = false;
    let out = spectrum_in
        .values
        .iter()
        .zip(spectrum_in.omegas())
        .map(|(f, omega)| {
            let medium_phase = if strength == 0.0 {
                0.0
            } else if omega == 0.0 {
                if !warned {
                    log::warn!("omega = 0 bin sits on the medium-phase pole; set to zero");
                    warned = true;
                }
                return 0.0;
            } else {
                strength / omega
            };
            2.0 * f.norm() * (0.5 * (medium_phase + omega * tau1)).cos().abs()
        })
        .collect();
    Ok(out)
}
