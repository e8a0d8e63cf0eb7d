use mbring::analysis::{feature_report, spectrum, transmission, FeatureKind, FeatureSettings, Spectrum, TransmissionCurve};
use mbring::lindisp::{propagate_fourier, propagate_spectrum};
use mbring::mbsolver::{step_pump, PumpPoint};
use mbring::pulse::a_to_spectral_fwhm;
use mbring::{gaussian_pulse, spectral_fwhm_to_a, ComplexEnvelope, MediumParams, PulseSpec, TimeGrid};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> TimeGrid {
    TimeGrid::new(0.0, 0.05, 1024).unwrap()
}

fn pulse(area: f64, fwhm: f64, detuning: f64, centre: f64) -> ComplexEnvelope {
    let spec = PulseSpec {
        area,
        spectral_fwhm: fwhm,
        detuning,
        center_time: centre,
        delay: 0.0,
    };
    gaussian_pulse(&spec, &grid()).unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn max_abs(e: &ComplexEnvelope) -> f64 {
    e.samples.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn scale_spectrum(s: &Spectrum, c: Complex64) -> Spectrum {
    Spectrum {
        values: s.values.iter().map(|v| v * c).collect(),
        ..s.clone()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linear_propagation_is_linear(
        a in complex(),
        b in complex(),
        fwhm in 1.0..6.0f64,
        detuning in -2.0..2.0f64,
        z in 0.1..2.0f64,
        gamma in 0.0..0.1f64,
    ) {
        let medium = MediumParams::ground_state(1.0, gamma);
        let x = pulse(1.0, fwhm, detuning, 15.0);
        let y = pulse(0.5, 2.0, -detuning, 20.0);
        let combined = x.scaled(a).try_add(&y.scaled(b)).unwrap();
        let lhs = propagate_fourier(&combined, z, &medium).unwrap();
        let px = propagate_fourier(&x, z, &medium).unwrap();
        let py = propagate_fourier(&y, z, &medium).unwrap();
        let rhs = px.scaled(a).try_add(&py.scaled(b)).unwrap();
        let scale = max_abs(&rhs).max(max_abs(&combined));
        for (l, r) in lhs.samples.iter().zip(&rhs.samples) {
            prop_assert!((l - r).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn spectrum_round_trip(
        area in -2.0..2.0f64,
        fwhm in 1.0..8.0f64,
        detuning in -3.0..3.0f64,
        centre in 16.0..30.0f64,
        t_start in -5.0..5.0f64,
    ) {
        let g = TimeGrid::new(t_start, 0.05, 1024).unwrap();
        let spec = PulseSpec { area, spectral_fwhm: fwhm, detuning, center_time: centre, delay: 0.0 };
        let env = gaussian_pulse(&spec, &g).unwrap();
        let back = spectrum(&env).to_envelope(&g).unwrap();
        let scale = max_abs(&env).max(1e-300);
        for (a, b) in env.samples.iter().zip(&back.samples) {
            prop_assert!((a - b).norm() <= 1e-10 * scale);
        }
    }

    #[test]
    fn parseval_holds(fwhm in 1.0..8.0f64, detuning in -3.0..3.0f64) {
        let env = pulse(1.3, fwhm, detuning, 20.0);
        let time_side: f64 = env.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * env.grid.dt;
        let freq_side = spectrum(&env).energy();
        prop_assert!((time_side - freq_side).abs() <= 1e-12 * time_side);
    }

    #[test]
    fn transmission_ignores_common_scaling(
        c in complex(),
        fwhm in 1.0..8.0f64,
        detuning in -2.0..2.0f64,
        z in 0.1..2.0f64,
    ) {
        prop_assume!(c.norm() > 1e-3);
        let medium = MediumParams::ground_state(1.0, 1e-2);
        let input = spectrum(&pulse(1.0, fwhm, detuning, 20.0));
        let output = propagate_spectrum(&input, z, &medium).unwrap();
        let t = transmission(&output, &input, 1e-3).unwrap();
        let u = transmission(&scale_spectrum(&output, c), &scale_spectrum(&input, c), 1e-3).unwrap();
        prop_assert_eq!(&t.floor_mask, &u.floor_mask);
        for (a, b) in t.ratio.iter().zip(&u.ratio) {
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
    }

    #[test]
    fn feature_kind_ignores_positive_scaling(
        k in 0.1..10.0f64,
        height in -0.4..0.4f64,
        centre in 0.3..2.0f64,
        width in 0.1..0.6f64,
    ) {
        let omegas: Vec<f64> = (0..801).map(|m| -8.0 + m as f64 * 0.02).collect();
        let base: Vec<f64> = omegas.iter().map(|w| 1.0 - 0.9 * (-(w / 0.05).powi(2)).exp()).collect();
        let curve_ratio: Vec<f64> = omegas
            .iter()
            .zip(&base)
            .map(|(w, b)| {
                let bump = height * ((-((w.abs() - centre) / width).powi(2)).exp());
                b * (1.0 + bump)
            })
            .collect();
        let make = |r: &[f64], s: f64| TransmissionCurve {
            omega_start: -8.0,
            domega: 0.02,
            ratio: r.iter().map(|v| v * s).collect(),
            floor_mask: vec![false; r.len()],
        };
        let settings = FeatureSettings::for_medium(1e-3);
        let one = feature_report(&make(&curve_ratio, 1.0), &make(&base, 1.0), &settings).unwrap();
        let many = feature_report(&make(&curve_ratio, k), &make(&base, k), &settings).unwrap();
        prop_assert_eq!(one.kind, many.kind);
        prop_assert!((one.width - many.width).abs() <= 1e-9);
        prop_assert!((many.contrast - k * one.contrast).abs() <= 1e-9 * k.max(1.0));
        let expected = if height.abs() < 0.03 {
            FeatureKind::Flat
        } else if height > 0.0 {
            FeatureKind::Doublet
        } else {
            FeatureKind::Dip
        };
        if height.abs() > 0.05 || height.abs() < 0.015 {
            prop_assert_eq!(one.kind, expected);
        }
    }

    #[test]
    fn width_conversion_round_trips(gamma_sp in 1e-3..1e3f64) {
        let a = spectral_fwhm_to_a(gamma_sp).unwrap();
        let back = a_to_spectral_fwhm(a).unwrap();
        prop_assert!((back - gamma_sp).abs() <= 1e-13 * gamma_sp);
    }

    #[test]
    fn lossless_step_keeps_bloch_length(
        p_re in -1.0..1.0f64,
        p_im in -1.0..1.0f64,
        wa in complex(),
        wb in complex(),
        h in 1e-3..5e-2f64,
    ) {
        let medium = MediumParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
        let p0 = Complex64::new(p_re, p_im) * 0.5;
        let y = PumpPoint { p0, d0: (1.0 - p0.norm_sqr()).sqrt() };
        let next = step_pump(y, h, wa, wb, &medium);
        // RK4 local error is O((h·|Ω|)⁵)
        let rate = h * wa.norm().max(wb.norm());
        prop_assert!((next.bloch_norm() - 1.0).abs() <= rate.powi(5) + 1e-14);
    }
}
