//! Output-to-input spectral ratios.

use serde::{Deserialize, Serialize};

use super::spectrum::Spectrum;
use crate::error::{Error, Result};
use crate::lindisp::linear_transmission;
use crate::medium::MediumParams;

/// Default regularization floor, relative to the input peak magnitude.
pub const DEFAULT_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmissionCurve {
    pub omega_start: f64,
    pub domega: f64,
    pub ratio: Vec<f64>,
    /// `true` where the input magnitude fell below the floor; `ratio` is zero there.
    pub floor_mask: Vec<bool>,
}

impl TransmissionCurve {
    pub fn len(&self) -> usize {
        self.ratio.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ratio.is_empty()
    }

    pub fn omega(&self, m: usize) -> f64 {
        self.omega_start + m as f64 * self.domega
    }

    pub fn omegas(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |m| self.omega(m))
    }

    pub fn same_grid(&self, other: &TransmissionCurve) -> bool {
        self.len() == other.len()
            && (self.domega - other.domega).abs() <= 1e-12 * self.domega
            && (self.omega_start - other.omega_start).abs() <= 1e-9 * self.domega
    }

    /// Pump-off transmission `|exp(−i(ck − ω)z)|` of the linear medium on the
    /// grid of `like`, carrying over its mask.
    pub fn linear_baseline(like: &TransmissionCurve, z: f64, medium: &MediumParams) -> Self {
        Self {
            omega_start: like.omega_start,
            domega: like.domega,
            ratio: like
                .omegas()
                .zip(&like.floor_mask)
                .map(|(w, &masked)| if masked { 0.0 } else { linear_transmission(w, z, medium) })
                .collect(),
            floor_mask: like.floor_mask.clone(),
        }
    }
}

/// `|F_out|/|F_in|` wherever `|F_in| >= floor·max|F_in|`.
pub fn transmission(out_spec: &Spectrum, in_spec: &Spectrum, floor: f64) -> Result<TransmissionCurve> {
    if !out_spec.same_grid(in_spec) || out_spec.values.len() != in_spec.values.len() {
        return Err(Error::GridMismatch("output and input spectra use different grids".into()));
    }
    if !(floor.is_finite() && floor > 0.0) {
        return Err(Error::InvalidParameter(format!("floor must be positive, got {floor}")));
    }
    let peak = in_spec.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let threshold = floor * peak;
    let mut ratio = Vec::with_capacity(in_spec.n);
    let mut floor_mask = Vec::with_capacity(in_spec.n);
    for (o, i) in out_spec.values.iter().zip(&in_spec.values) {
        let mag = i.norm();
        if mag >= threshold && mag > 0.0 {
            ratio.push(o.norm() / mag);
            floor_mask.push(false);
        } else {
            ratio.push(0.0);
            floor_mask.push(true);
        }
    }
    Ok(TransmissionCurve {
        omega_start: in_spec.omega_start,
        domega: in_spec.domega,
        ratio,
        floor_mask,
    })
}
