//! Dimensionless description of the resonant medium and the beam geometry.
//!
//! Every quantity is expressed in units of the cooperative frequency, with the
//! speed of light set to one: times are `t·ω_c`, detunings `ω/ω_c` and
//! propagation distances `z·ω_c/c`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Homogeneously broadened two-level medium.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumParams {
    /// Cooperative frequency `ω_c`. Zero describes vacuum.
    pub omega_c: f64,
    /// Population relaxation rate.
    pub gamma1: f64,
    /// Polarization dephasing rate.
    pub gamma2: f64,
    /// Equilibrium population difference (`1` is the ground state).
    pub d_eq: f64,
}

impl Default for MediumParams {
    fn default() -> Self {
        Self {
            omega_c: 1.0,
            gamma1: 1e-3,
            gamma2: 1e-3,
            d_eq: 1.0,
        }
    }
}

impl MediumParams {
    pub fn new(omega_c: f64, gamma1: f64, gamma2: f64, d_eq: f64) -> Result<Self> {
        let medium = Self {
            omega_c,
            gamma1,
            gamma2,
            d_eq,
        };
        medium.validate()?;
        Ok(medium)
    }

    /// Ground-state medium with equal relaxation rates.
    pub fn ground_state(omega_c: f64, gamma: f64) -> Self {
        Self {
            omega_c,
            gamma1: gamma,
            gamma2: gamma,
            d_eq: 1.0,
        }
    }

    /// A medium with no resonant atoms.
    pub fn vacuum() -> Self {
        Self {
            omega_c: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            d_eq: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_c.is_finite() && self.omega_c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "omega_c must be finite and non-negative, got {}",
                self.omega_c
            )));
        }
        if !(self.gamma1.is_finite() && self.gamma1 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma1 must be non-negative, got {}",
                self.gamma1
            )));
        }
        if !(self.gamma2.is_finite() && self.gamma2 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma2 must be non-negative, got {}",
                self.gamma2
            )));
        }
        if !(self.d_eq.is_finite() && self.d_eq.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "d_eq must lie in [-1, 1], got {}",
                self.d_eq
            )));
        }
        Ok(())
    }

    /// Collective oscillations outrun dephasing: `ω_c > γ₂`.
    pub fn is_strongly_coupled(&self) -> bool {
        self.omega_c > self.gamma2
    }

    /// `ω_D = ω_c² z / c`, the inverse duration of the first re-emitted lobe at depth `z`.
    pub fn omega_d(&self, z: f64) -> f64 {
        self.omega_c * self.omega_c * z
    }

    /// Incoherent absorption exponent at line centre, `ω_c² z / (γ₂ c)`.
    pub fn optical_density(&self, z: f64) -> f64 {
        self.omega_d(z) / self.gamma2
    }
}

/// Probe-pump crossing geometry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamGeometry {
    /// Probe-pump intersection angle in radians.
    pub angle: f64,
}

impl Default for BeamGeometry {
    fn default() -> Self {
        Self {
            angle: 1f64.to_radians(),
        }
    }
}

impl BeamGeometry {
    pub fn new(angle: f64) -> Result<Self> {
        let geometry = Self { angle };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn from_degrees(deg: f64) -> Result<Self> {
        Self::new(deg.to_radians())
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.angle.is_finite() && self.angle >= 0.0 && self.angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "beam angle must lie in [0, pi/2), got {}",
                self.angle
            )));
        }
        Ok(())
    }
}
