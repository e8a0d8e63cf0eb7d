//! Node times of the ringing tail.

use num_complex::Complex64;

use super::spectrum::spectrum;
use crate::grid::ComplexEnvelope;

/// Default depth a minimum must reach, relative to its neighbouring maxima.
pub const DEFAULT_NODE_FRACTION: f64 = 0.1;

/// Times `τ > t_min` of the nodes of `|Ω(τ)|`, using [`DEFAULT_NODE_FRACTION`].
pub fn find_ringing_nodes(env: &ComplexEnvelope, t_min: f64) -> Vec<f64> {
    find_ringing_nodes_with(env, t_min, DEFAULT_NODE_FRACTION)
}

/// Local minima of `|Ω|` after `t_min` that fall below `fraction` of the
/// smaller of the two adjacent maxima, refined by a parabola through `|Ω|²`.
pub fn find_ringing_nodes_with(env: &ComplexEnvelope, t_min: f64, fraction: f64) -> Vec<f64> {
    let power: Vec<f64> = env.samples.iter().map(|s| s.norm_sqr()).collect();
    let n = power.len();
    if n < 3 {
        return Vec::new();
    }
    let start = ((t_min - env.grid.t_start) / env.grid.dt).ceil().max(1.0) as usize;
    if start >= n - 1 {
        return Vec::new();
    }

    // alternating list of local extrema (index, is_max) over the search range
    let mut extrema: Vec<(usize, bool)> = Vec::new();
    for j in start..n - 1 {
        let (a, b, c) = (power[j - 1], power[j], power[j + 1]);
        if b < a && b <= c {
            extrema.push((j, false));
        } else if b > a && b >= c {
            extrema.push((j, true));
        }
    }

    let f2 = fraction * fraction;
    let mut nodes = Vec::new();
    for (i, &(j, is_max)) in extrema.iter().enumerate() {
        if is_max {
            continue;
        }
        let left = extrema[..i].iter().rev().find(|e| e.1).map(|e| power[e.0]);
        let right = extrema[i + 1..].iter().find(|e| e.1).map(|e| power[e.0]);
        let (Some(left), Some(right)) = (left, right) else {
            continue;
        };
        if power[j] > f2 * left.min(right) {
            continue;
        }
        let (a, b, c) = (power[j - 1], power[j], power[j + 1]);
        let curvature = a - 2.0 * b + c;
        let shift = if curvature > 0.0 { 0.5 * (a - c) / curvature } else { 0.0 };
        nodes.push(env.grid.time(j) + shift.clamp(-0.5, 0.5) * env.grid.dt);
    }
    nodes
}

/// Times `τ > t_min` at which the positive- and negative-frequency parts of
/// `Ω` are in antiphase.
///
/// The ringing tail is a beat between wave-packets on either side of
/// resonance. When both carry equal weight these are the zeros of `|Ω|`;
/// for a detuned input the packets differ in size and `|Ω|` only dips, but
/// the antiphase times remain defined.
pub fn find_beat_nodes(env: &ComplexEnvelope, t_min: f64) -> Vec<f64> {
    let spec = spectrum(env);
    let mut upper = spec.clone();
    let mut lower = spec;
    for m in 0..upper.n {
        let w = upper.omega(m);
        if w < 0.0 {
            upper.values[m] = Complex64::new(0.0, 0.0);
        } else if w > 0.0 {
            lower.values[m] = Complex64::new(0.0, 0.0);
        } else {
            upper.values[m] *= 0.5;
            lower.values[m] *= 0.5;
        }
    }
    let grid = env.grid;
    let (Ok(up), Ok(down)) = (upper.to_envelope(&grid), lower.to_envelope(&grid)) else {
        return Vec::new();
    };
    let product: Vec<Complex64> = up.samples.iter().zip(&down.samples).map(|(a, b)| a * b.conj()).collect();
    let mut nodes = Vec::new();
    for j in 1..product.len() {
        if grid.time(j - 1) <= t_min {
            continue;
        }
        let (a, b) = (product[j - 1], product[j]);
        // crossing of the negative real axis
        if (a.im > 0.0) != (b.im > 0.0) && a.re + b.re < 0.0 {
            let f = a.im / (a.im - b.im);
            nodes.push(grid.time(j - 1) + f * grid.dt);
        }
    }
    nodes
}
