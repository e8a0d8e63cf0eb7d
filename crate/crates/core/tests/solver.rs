use std::f64::consts::PI;

use mbring::lindisp::propagate_convolution;
use mbring::mbsolver::{
    simulate_pump_probe, simulate_single_beam, FieldCorrector, MarchOrder, SolverConfig,
};
use mbring::{gaussian_pulse, BeamGeometry, ComplexEnvelope, Error, MediumParams, PulseSpec, TimeGrid};
use num_complex::Complex64;

fn pulse(area: f64, fwhm: f64, centre: f64, delay: f64, grid: &TimeGrid) -> ComplexEnvelope {
    let spec = PulseSpec {
        area,
        spectral_fwhm: fwhm,
        detuning: 0.0,
        center_time: centre,
        delay,
    };
    gaussian_pulse(&spec, grid).unwrap()
}

fn config(z: f64, order: MarchOrder) -> SolverConfig {
    SolverConfig {
        march_order: order,
        ..SolverConfig::for_length(z)
    }
}

#[test]
fn weak_pulse_follows_linear_theory() {
    let grid = TimeGrid::new(0.0, 0.05, 4096).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let input = pulse(1e-4 * PI, 1.0, 20.0, 0.0, &grid);
    let oracle = propagate_convolution(&input, 1.0, &medium).unwrap();
    let out = simulate_single_beam(&input, &medium, &SolverConfig::for_length(1.0), &grid).unwrap();
    let err = out.pump_output().relative_l2_error(&oracle).unwrap();
    assert!(err < 1e-3, "relative L2 {err}");
}

#[test]
fn slab_ordering_converges_to_the_same_answer() {
    let grid = TimeGrid::new(0.0, 0.05, 1024).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let input = pulse(1e-3, 2.0, 10.0, 0.0, &grid);
    let oracle = propagate_convolution(&input, 0.5, &medium).unwrap();
    let err = |n_z: usize| {
        let cfg = SolverConfig {
            n_z,
            ..config(0.5, MarchOrder::Slab)
        };
        let out = simulate_single_beam(&input, &medium, &cfg, &grid).unwrap();
        out.pump_output().relative_l2_error(&oracle).unwrap()
    };
    let (coarse, fine) = (err(50), err(200));
    assert!(fine < coarse / 8.0, "{coarse} -> {fine}");
}

#[test]
fn corrector_improves_on_euler() {
    let grid = TimeGrid::new(0.0, 0.05, 2048).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let input = pulse(1e-4, 1.0, 20.0, 0.0, &grid);
    let oracle = propagate_convolution(&input, 1.0, &medium).unwrap();
    let err = |corrector| {
        let cfg = SolverConfig {
            field_corrector: corrector,
            ..SolverConfig::for_length(1.0)
        };
        let out = simulate_single_beam(&input, &medium, &cfg, &grid).unwrap();
        out.pump_output().relative_l2_error(&oracle).unwrap()
    };
    assert!(err(FieldCorrector::Heun) < err(FieldCorrector::Euler));
}

#[test]
fn lossless_bloch_vector_keeps_its_length() {
    let grid = TimeGrid::new(0.0, 0.05, 1024).unwrap();
    let medium = MediumParams::new(1.0, 0.0, 0.0, 1.0).unwrap();
    let input = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
    for order in [MarchOrder::Characteristic, MarchOrder::Slab] {
        let out = simulate_single_beam(&input, &medium, &config(1.0, order), &grid).unwrap();
        assert!(out.diagnostics.max_bloch_norm_drift < 1e-6, "{order:?}");
        assert!(out.diagnostics.min_d0 > 0.0);
    }
}

#[test]
fn vacuum_passes_fields_unchanged() {
    let grid = TimeGrid::new(0.0, 0.05, 512).unwrap();
    let input = pulse(1.0, 4.0, 5.0, 0.0, &grid);
    let out = simulate_single_beam(&input, &MediumParams::vacuum(), &SolverConfig::for_length(1.0), &grid).unwrap();
    assert_eq!(out.pump_output(), &input);
}

#[test]
fn pump_is_blind_to_the_probe() {
    let grid = TimeGrid::new(0.0, 0.05, 512).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let pump = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
    let probe = pulse(0.01, 10.0, 3.0, 0.5, &grid);
    for order in [MarchOrder::Characteristic, MarchOrder::Slab] {
        let cfg = config(0.5, order);
        let alone = simulate_single_beam(&pump, &medium, &cfg, &grid).unwrap();
        let both = simulate_pump_probe(&pump, &probe, &BeamGeometry::default(), &medium, &cfg, &grid).unwrap();
        assert_eq!(alone.pump_fields, both.pump_fields, "{order:?}");
    }
}

#[test]
fn probe_response_is_linear() {
    let grid = TimeGrid::new(0.0, 0.05, 512).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let geometry = BeamGeometry::default();
    let cfg = SolverConfig::for_length(0.5);
    let pump = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
    let a = pulse(0.01, 10.0, 3.0, -0.5, &grid);
    let b = pulse(0.02, 4.0, 4.0, 0.3, &grid);
    let run = |probe: &ComplexEnvelope| {
        simulate_pump_probe(&pump, probe, &geometry, &medium, &cfg, &grid)
            .unwrap()
            .probe_output()
            .unwrap()
            .clone()
    };
    let c = Complex64::new(0.3, -1.7);
    let combined = run(&a.scaled(c).try_add(&b).unwrap());
    let expected = run(&a).scaled(c).try_add(&run(&b)).unwrap();
    assert!(combined.relative_l2_error(&expected).unwrap() < 1e-12);
}

#[test]
fn probe_drift_is_a_small_correction() {
    let grid = TimeGrid::new(0.0, 0.05, 1024).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let pump = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
    let probe = pulse(0.01, 10.0, 3.0, 0.5, &grid);
    let run = |drift| {
        let cfg = SolverConfig {
            include_probe_drift: drift,
            ..SolverConfig::for_length(1.0)
        };
        simulate_pump_probe(&pump, &probe, &BeamGeometry::default(), &medium, &cfg, &grid)
            .unwrap()
            .probe_output()
            .unwrap()
            .clone()
    };
    let (with, without) = (run(true), run(false));
    let diff = with.relative_l2_error(&without).unwrap();
    assert!(diff > 0.0 && diff < 1e-2, "{diff}");
}

#[test]
fn snapshots_and_states_are_recorded() {
    let grid = TimeGrid::new(0.0, 0.05, 256).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let pump = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
    let probe = pulse(0.01, 10.0, 3.0, 0.0, &grid);
    for order in [MarchOrder::Characteristic, MarchOrder::Slab] {
        let cfg = SolverConfig {
            snapshots: vec![0.1, 0.5],
            record_states: true,
            ..config(1.0, order)
        };
        let out = simulate_pump_probe(&pump, &probe, &BeamGeometry::default(), &medium, &cfg, &grid).unwrap();
        assert_eq!(out.z_samples.len(), 4);
        for (z, expected) in out.z_samples.iter().zip([0.0, 0.1, 0.5, 1.0]) {
            assert!((z - expected).abs() < 1e-12);
        }
        assert_eq!(out.pump_fields[0], pump);
        assert_eq!(out.probe_fields[0], probe);
        let states = out.states.as_ref().unwrap();
        assert_eq!(states.len(), 4);
        assert!(states.iter().all(|s| s.p0.len() == grid.n && s.d1.len() == grid.n));
        // at the entrance a 0.49π pump leaves D₀ ≈ cos(0.49π)
        assert!((states[0].d0[grid.n - 1] - (0.49 * PI).cos()).abs() < 0.02);
        assert_eq!(out.nearest(0.45), 2);
    }
}

#[test]
fn orderings_agree_on_the_pump_probe_problem() {
    let grid = TimeGrid::new(0.0, 0.05, 512).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let pump = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
    let probe = pulse(0.01, 10.0, 3.0, -0.5, &grid);
    let run = |order, n_z| {
        let cfg = SolverConfig {
            n_z,
            ..config(0.5, order)
        };
        simulate_pump_probe(&pump, &probe, &BeamGeometry::default(), &medium, &cfg, &grid).unwrap()
    };
    let a = run(MarchOrder::Characteristic, 50);
    let b = run(MarchOrder::Slab, 400);
    assert!(a.pump_output().relative_l2_error(b.pump_output()).unwrap() < 1e-3);
    assert!(a.probe_output().unwrap().relative_l2_error(b.probe_output().unwrap()).unwrap() < 1e-3);
}

#[test]
fn halving_both_steps_converges_at_second_order() {
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let probe_at = |dt: f64, n_z: usize| {
        let n = (25.6 / dt).round() as usize;
        let grid = TimeGrid::new(0.0, dt, n).unwrap();
        let pump = pulse(0.49 * PI, 10.0, 3.0, 0.0, &grid);
        let probe = pulse(0.01, 10.0, 3.0, 0.5, &grid);
        let cfg = SolverConfig {
            n_z,
            ..SolverConfig::for_length(0.5)
        };
        let out = simulate_pump_probe(&pump, &probe, &BeamGeometry::default(), &medium, &cfg, &grid).unwrap();
        out.probe_output().unwrap().clone()
    };
    let coarse = probe_at(0.1, 25);
    let mid = probe_at(0.05, 50);
    let fine = probe_at(0.025, 100);
    // differences on the coarse sample times
    let at_coarse = |e: &ComplexEnvelope, j: usize| e.samples[j * (e.len() / coarse.len())];
    let diff = |a: &ComplexEnvelope, b: &ComplexEnvelope| {
        let sq: f64 = (0..coarse.len()).map(|j| (at_coarse(a, j) - at_coarse(b, j)).norm_sqr()).sum();
        sq.sqrt()
    };
    let d1 = diff(&coarse, &mid);
    let d2 = diff(&mid, &fine);
    let order = (d1 / d2).log2();
    eprintln!("observed order {order}");
    assert!(order > 1.8, "observed order {order}");
}

#[test]
fn area_guard_and_step_size_warn() {
    let grid = TimeGrid::new(0.0, 0.05, 256).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let pump = pulse(0.6 * PI, 10.0, 3.0, 0.0, &grid);
    let cfg = SolverConfig {
        n_z: 10,
        ..SolverConfig::for_length(1.0)
    };
    let out = simulate_single_beam(&pump, &medium, &cfg, &grid).unwrap();
    assert_eq!(out.warnings.len(), 2, "{:?}", out.warnings);
    assert!(out.diagnostics.min_d0 < 0.0);
}

#[test]
fn bad_inputs_are_rejected() {
    let grid = TimeGrid::new(0.0, 0.05, 256).unwrap();
    let other = TimeGrid::new(0.0, 0.05, 128).unwrap();
    let medium = MediumParams::ground_state(1.0, 1e-3);
    let pump = pulse(0.1, 10.0, 3.0, 0.0, &grid);
    let cfg = SolverConfig::for_length(1.0);
    assert!(matches!(
        simulate_single_beam(&pump, &medium, &cfg, &other),
        Err(Error::GridMismatch(_))
    ));
    let zero_steps = SolverConfig { n_z: 0, ..cfg.clone() };
    assert!(matches!(
        simulate_single_beam(&pump, &medium, &zero_steps, &grid),
        Err(Error::InvalidParameter(_))
    ));
    let outside = SolverConfig {
        snapshots: vec![2.0],
        ..cfg.clone()
    };
    assert!(simulate_single_beam(&pump, &medium, &outside, &grid).is_err());
    let steep = BeamGeometry { angle: 2.0 };
    assert!(simulate_pump_probe(&pump, &pump, &steep, &medium, &cfg, &grid).is_err());
}
