//! Thin wrapper over `rustfft` with the sign conventions used throughout the crate.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place `X_k = Σ_j x_j e^{−2πijk/n}`.
pub(crate) fn forward(buf: &mut [Complex64]) {
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(buf.len()).process(buf);
}

/// In-place `x_j = (1/n) Σ_k X_k e^{+2πijk/n}`.
pub(crate) fn inverse(buf: &mut [Complex64]) {
    let n = buf.len();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(n).process(buf);
    let scale = 1.0 / n as f64;
    for x in buf.iter_mut() {
        *x *= scale;
    }
}

/// Angular frequency of DFT bin `k` for sample spacing `dt`, folded to `[−π/dt, π/dt)`.
pub(crate) fn bin_frequency(k: usize, n: usize, dt: f64) -> f64 {
    let domega = 2.0 * std::f64::consts::PI / (n as f64 * dt);
    // for even n, bin n/2 is the negative Nyquist frequency
    let signed = if k < n - n / 2 { k as f64 } else { k as f64 - n as f64 };
    signed * domega
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let orig: Vec<Complex64> = (0..12)
            .map(|j| Complex64::new(j as f64, (j * j) as f64 * 0.1))
            .collect();
        let mut buf = orig.clone();
        forward(&mut buf);
        inverse(&mut buf);
        for (a, b) in buf.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn bin_layout() {
        let dt = 0.5;
        let dw = 2.0 * std::f64::consts::PI / (8.0 * dt);
        assert_eq!(bin_frequency(0, 8, dt), 0.0);
        assert!((bin_frequency(3, 8, dt) - 3.0 * dw).abs() < 1e-15);
        assert!((bin_frequency(4, 8, dt) + 4.0 * dw).abs() < 1e-15);
        assert!((bin_frequency(7, 8, dt) + dw).abs() < 1e-15);
        let dw7 = 2.0 * std::f64::consts::PI / (7.0 * dt);
        assert!((bin_frequency(3, 7, dt) - 3.0 * dw7).abs() < 1e-15);
        assert!((bin_frequency(4, 7, dt) + 3.0 * dw7).abs() < 1e-15);
    }
}
