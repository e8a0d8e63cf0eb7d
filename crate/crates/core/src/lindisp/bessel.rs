//! First-kind Bessel function of order one.
//!
//! Power series inside `|x| <= SERIES_LIMIT`, Hankel asymptotic expansion
//! outside. Both branches agree to ~1e-11 at the seam.

use std::f64::consts::PI;

const SERIES_LIMIT: f64 = 12.0;

/// `J₁(x)`, absolute error below 1e-10 for `|x| <= 1e4`.
pub fn bessel_j1(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax <= SERIES_LIMIT {
        0.5 * ax * series_j1_over_half_x(ax)
    } else {
        hankel_j1(ax)
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// `2J₁(x)/x`, continuous through `x = 0` where it equals one.
pub fn j1_over_half_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax <= SERIES_LIMIT {
        series_j1_over_half_x(ax)
    } else {
        2.0 * hankel_j1(ax) / ax
    }
}

// Σ (−1)^k (x/2)^{2k} / (k!(k+1)!)
fn series_j1_over_half_x(x: f64) -> f64 {
    let q = -0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k as f64 * (k + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

fn hankel_j1(x: f64) -> f64 {
    const MU: f64 = 4.0; // 4ν² for ν = 1
    let mut p = 0.0;
    let mut q = 0.0;
    let mut a = 1.0; // a_k / x^k with alternating sign folded in below
    let mut last = f64::INFINITY;
    for k in 0..60 {
        if k > 0 {
            let odd = (2 * k - 1) as f64;
            a *= (MU - odd * odd) / (k as f64 * 8.0 * x);
        }
        let mag = a.abs();
        if mag > last {
            break;
        }
        last = mag;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if mag < 1e-17 {
            break;
        }
    }
    let chi = x - 0.75 * PI;
    (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin())
}

#[cfg(test)]
mod tests {
    use super::*;

    // Bessel's integral J₁(x) = (1/2π)∫cos(θ − x sin θ)dθ over one period; the
    // trapezoid rule converges geometrically for this periodic integrand.
    fn oracle(x: f64) -> f64 {
        let n = (2.0 * x.abs()) as usize + 256;
        let sum: f64 = (0..n)
            .map(|j| {
                let th = 2.0 * PI * j as f64 / n as f64;
                (th - x * th.sin()).cos()
            })
            .sum();
        sum / n as f64
    }

    #[test]
    fn known_values() {
        assert_eq!(bessel_j1(0.0), 0.0);
        assert!((bessel_j1(1.0) - 0.4400505857449335).abs() < 1e-12);
        assert!(bessel_j1(3.8317059702075125).abs() < 1e-9);
        assert!(bessel_j1(7.015586669815619).abs() < 1e-9);
    }

    #[test]
    fn matches_integral_oracle() {
        let mut x = 0.0;
        while x < 60.0 {
            assert!((bessel_j1(x) - oracle(x)).abs() < 1e-10, "x = {x}");
            x += 0.173;
        }
        for &x in &[99.5, 250.0, 1234.5, 5000.1, 9999.0] {
            assert!((bessel_j1(x) - oracle(x)).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn seam_is_continuous() {
        let s = 0.5 * SERIES_LIMIT * series_j1_over_half_x(SERIES_LIMIT);
        assert!((s - hankel_j1(SERIES_LIMIT)).abs() < 1e-10);
    }

    #[test]
    fn odd_symmetry() {
        for &x in &[0.3, 5.0, 12.0, 12.5, 400.0] {
            assert_eq!(bessel_j1(-x), -bessel_j1(x));
        }
    }

    #[test]
    fn ratio_form() {
        assert_eq!(j1_over_half_x(0.0), 1.0);
        for &x in &[1e-6, 0.5, 11.0, 30.0] {
            assert!((j1_over_half_x(x) - 2.0 * bessel_j1(x) / x).abs() < 1e-12);
        }
    }
}
