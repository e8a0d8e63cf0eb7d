//! Classification of broad near-resonance features in a transmission curve.
//!
//! The curve is compared with the pump-off baseline through the relative
//! excess `r(ω) = curve/baseline − 1`. Bins inside the absorption core are
//! ignored: those within `3γ₂` of resonance and those where the baseline
//! itself absorbs more than `core_absorption` of its window maximum.
//!
//! Widths are measured at the outer half-height of the feature: where `r`
//! last crosses half its extreme value, walking away from resonance. Fine
//! oscillations near the core then do not move the reported width.

use serde::{Deserialize, Serialize};

use super::transmission::TransmissionCurve;
use crate::error::{Error, Result};

pub const DEFAULT_WINDOW: f64 = 5.0;
pub const DEFAULT_SIGNIFICANCE: f64 = 0.02;
pub const DEFAULT_CORE_ABSORPTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Doublet,
    Dip,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub kind: FeatureKind,
    /// Doublet maxima or dip minima, below and above resonance.
    pub peak_offsets: (f64, f64),
    /// Full width at the outer half-height (doublet) or half-depth (dip).
    pub width: f64,
    /// `max |curve − baseline|` over the classified bins.
    pub contrast: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FeatureSettings {
    /// Half-width of the search interval around resonance.
    pub window: f64,
    pub gamma2: f64,
    /// Smallest relative excess or deficit counted as a feature.
    pub significance: f64,
    /// Bins where the baseline falls below `1 − core_absorption` of its
    /// window maximum belong to the absorption core.
    pub core_absorption: f64,
}

impl Default for FeatureSettings {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            gamma2: 1e-3,
            significance: DEFAULT_SIGNIFICANCE,
            core_absorption: DEFAULT_CORE_ABSORPTION,
        }
    }
}

impl FeatureSettings {
    pub fn for_medium(gamma2: f64) -> Self {
        Self {
            gamma2,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy)]
struct Bin {
    omega: f64,
    rel: f64,
}

/// One side of resonance, ordered outward from the core.
struct Side {
    bins: Vec<Bin>,
}

impl Side {
    fn argmax(&self) -> Option<usize> {
        (0..self.bins.len()).max_by(|&a, &b| self.bins[a].rel.total_cmp(&self.bins[b].rel))
    }

    fn argmin(&self) -> Option<usize> {
        (0..self.bins.len()).min_by(|&a, &b| self.bins[a].rel.total_cmp(&self.bins[b].rel))
    }

    /// Extremum position refined by a parabola through its neighbours.
    fn refined(&self, i: usize) -> f64 {
        let b = &self.bins;
        if i == 0 || i + 1 >= b.len() {
            return b[i].omega;
        }
        let (l, c, r) = (b[i - 1], b[i], b[i + 1]);
        let h = c.omega - l.omega;
        let contiguous = ((r.omega - c.omega) - h).abs() <= 1e-9 * h.abs();
        let denom = l.rel - 2.0 * c.rel + r.rel;
        if !contiguous || denom == 0.0 {
            return c.omega;
        }
        c.omega + 0.5 * h * (l.rel - r.rel) / denom
    }

    /// Walks outward from `from` while `inside` holds and returns the
    /// interpolated crossing of `level`, or the last bin if none.
    fn outer_edge(&self, from: usize, level: f64, inside: impl Fn(f64) -> bool) -> f64 {
        let b = &self.bins;
        let mut k = from;
        while k + 1 < b.len() && inside(b[k + 1].rel) {
            k += 1;
        }
        if k + 1 == b.len() {
            return b[k].omega;
        }
        let (a, c) = (b[k], b[k + 1]);
        a.omega + (level - a.rel) / (c.rel - a.rel) * (c.omega - a.omega)
    }
}

/// Classifies the broad feature of `curve` relative to `baseline`.
pub fn feature_report(
    curve: &TransmissionCurve,
    baseline: &TransmissionCurve,
    settings: &FeatureSettings,
) -> Result<FeatureReport> {
    if !curve.same_grid(baseline) {
        return Err(Error::GridMismatch("curve and baseline lie on different grids".into()));
    }
    if !(settings.window > 0.0) {
        return Err(Error::InvalidParameter(format!("window must be positive, got {}", settings.window)));
    }
    let usable = |m: usize| {
        let w = curve.omega(m);
        w != 0.0
            && w.abs() <= settings.window
            && !curve.floor_mask[m]
            && !baseline.floor_mask[m]
            && baseline.ratio[m] > 0.0
    };
    let peak_baseline = (0..curve.len())
        .filter(|&m| usable(m))
        .map(|m| baseline.ratio[m])
        .fold(0.0, f64::max);
    let core_level = (1.0 - settings.core_absorption) * peak_baseline;
    let core_radius = 3.0 * settings.gamma2;
    let selected: Vec<usize> = (0..curve.len())
        .filter(|&m| usable(m) && curve.omega(m).abs() > core_radius && baseline.ratio[m] >= core_level)
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptyWindow(format!(
            "no unmasked bins outside the absorption core within |omega| <= {}",
            settings.window
        )));
    }

    let bin = |m: usize| Bin {
        omega: curve.omega(m),
        rel: curve.ratio[m] / baseline.ratio[m] - 1.0,
    };
    let left = Side {
        bins: selected.iter().rev().filter(|&&m| curve.omega(m) < 0.0).map(|&m| bin(m)).collect(),
    };
    let right = Side {
        bins: selected.iter().filter(|&&m| curve.omega(m) > 0.0).map(|&m| bin(m)).collect(),
    };
    let contrast = selected
        .iter()
        .map(|&m| (curve.ratio[m] - baseline.ratio[m]).abs())
        .fold(0.0, f64::max);

    let flat = FeatureReport {
        kind: FeatureKind::Flat,
        peak_offsets: (0.0, 0.0),
        width: 0.0,
        contrast,
    };
    let all = left.bins.iter().chain(&right.bins);
    let max_rel = all.clone().map(|b| b.rel).fold(f64::NEG_INFINITY, f64::max);
    let min_rel = all.map(|b| b.rel).fold(f64::INFINITY, f64::min);
    let sig = settings.significance;

    if max_rel >= -min_rel {
        let (Some(il), Some(ir)) = (left.argmax(), right.argmax()) else {
            return Ok(flat);
        };
        if left.bins[il].rel <= sig || right.bins[ir].rel <= sig {
            return Ok(flat);
        }
        let level = |s: &Side, i: usize| 0.5 * s.bins[i].rel;
        let lo = left.outer_edge(il, level(&left, il), |r| r >= level(&left, il));
        let hi = right.outer_edge(ir, level(&right, ir), |r| r >= level(&right, ir));
        Ok(FeatureReport {
            kind: FeatureKind::Doublet,
            peak_offsets: (left.refined(il), right.refined(ir)),
            width: hi - lo,
            contrast,
        })
    } else {
        if min_rel >= -sig {
            return Ok(flat);
        }
        let level = 0.5 * min_rel;
        let core_left = left.bins.first().map_or(0.0, |b| b.omega);
        let core_right = right.bins.first().map_or(0.0, |b| b.omega);
        // a side that never reaches half depth contributes its core edge
        let edge = |s: &Side, core: f64| match s.argmin() {
            Some(i) if s.bins[i].rel < level => s.outer_edge(i, level, |r| r < level),
            _ => core,
        };
        let lo = edge(&left, core_left);
        let hi = edge(&right, core_right);
        let offsets = (
            left.argmin().map_or(core_left, |i| left.refined(i)),
            right.argmin().map_or(core_right, |i| right.refined(i)),
        );
        Ok(FeatureReport {
            kind: FeatureKind::Dip,
            peak_offsets: offsets,
            width: hi - lo,
            contrast,
        })
    }
}
