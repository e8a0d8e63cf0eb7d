//! Parameter sets of the published figures.

use std::f64::consts::PI;

use mbring::mbsolver::SolverConfig;
use mbring::{MediumParams, PulseSpec};
use serde::{Deserialize, Serialize};

use crate::config::{Emit, Outputs, Pipeline, RunConfig};
use crate::error::{CliError, CliResult};

pub const PRESET_NAMES: [&str; 8] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8"];

/// A named figure: one run per curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub runs: Vec<RunConfig>,
}

const PUMP_AREA: f64 = 0.49 * PI;
const RELAXATION: f64 = 1e-3;
const PROBE_AREA: f64 = 1e-3;

fn medium() -> MediumParams {
    MediumParams::ground_state(1.0, RELAXATION)
}

fn gaussian(area: f64, spectral_fwhm: f64, detuning: f64, center_time: f64, delay: f64) -> PulseSpec {
    PulseSpec {
        area,
        spectral_fwhm,
        detuning,
        center_time,
        delay,
    }
}

fn emit(kinds: &[Emit]) -> Outputs {
    Outputs {
        emit: kinds.iter().copied().collect(),
        ..Outputs::default()
    }
}

/// Signed compact label, e.g. `m0.5`, `p0.5`, `0`.
fn signed(x: f64) -> String {
    if x < 0.0 {
        format!("m{}", -x)
    } else if x > 0.0 {
        format!("p{x}")
    } else {
        "0".into()
    }
}

/// Broadband resonant pump and probe, `γ_sp = 10`, `t₀ = 3`.
fn broadband(label: String, tau0: f64, z_max: f64, z_cuts: Vec<f64>, kinds: &[Emit]) -> RunConfig {
    RunConfig {
        label,
        pipeline: Some(Pipeline::PumpProbe),
        medium: medium(),
        pump: gaussian(PUMP_AREA, 10.0, 0.0, 3.0, 0.0),
        probe: Some(gaussian(PROBE_AREA, 10.0, 0.0, 3.0, tau0)),
        solver: SolverConfig::for_length(z_max),
        outputs: Outputs { z_cuts, ..emit(kinds) },
        ..RunConfig::default()
    }
}

/// Same pump with the narrow-band detuned probe, `γ_sp1 = 1`, `Δ₁ = 2.5`.
fn narrowband(label: String, z_max: f64, z_cuts: Vec<f64>) -> RunConfig {
    RunConfig {
        label,
        pipeline: Some(Pipeline::PumpProbe),
        medium: medium(),
        pump: gaussian(PUMP_AREA, 10.0, 0.0, 20.0, 0.0),
        probe: Some(gaussian(PROBE_AREA, 1.0, 2.5, 20.0, 0.0)),
        solver: SolverConfig::for_length(z_max),
        outputs: Outputs {
            z_cuts,
            ..emit(&[Emit::Spectra, Emit::Transmission, Emit::Features, Emit::Diagnostics])
        },
        ..RunConfig::default()
    }
}

pub fn preset(name: &str) -> CliResult<Preset> {
    let (description, runs) = match name {
        "fig1" => (
            "linear dispersion for gamma2 = 1.1, 0.15, 0 and group velocity",
            [1.1, 0.15, 0.0]
                .into_iter()
                .map(|g2| RunConfig {
                    label: format!("fig1_gamma2_{g2}"),
                    pipeline: Some(Pipeline::Dispersion),
                    medium: MediumParams::ground_state(1.0, g2),
                    outputs: emit(&[Emit::Spectra, Emit::Diagnostics]),
                    ..RunConfig::default()
                })
                .collect(),
        ),
        "fig2" => (
            "optical ringing of a gamma_sp = 1 pulse at detunings 0, 0.5, 1",
            [0.0, 0.5, 1.0]
                .into_iter()
                .map(|delta| RunConfig {
                    label: format!("fig2_delta_{delta}"),
                    pipeline: Some(Pipeline::Linear),
                    medium: medium(),
                    pump: gaussian(1.0, 1.0, delta, 20.0, 0.0),
                    solver: SolverConfig::for_length(1.0),
                    outputs: emit(&[Emit::Fields, Emit::Spectra, Emit::Nodes, Emit::Diagnostics]),
                    ..RunConfig::default()
                })
                .collect(),
        ),
        "fig3" => (
            "broadband probe spectra at tau0 = -0.5, 0.5, z = 1",
            [-0.5, 0.5]
                .into_iter()
                .map(|t| {
                    broadband(
                        format!("fig3_tau0_{}", signed(t)),
                        t,
                        1.0,
                        Vec::new(),
                        &[Emit::Spectra, Emit::Transmission, Emit::Features, Emit::Diagnostics],
                    )
                })
                .collect(),
        ),
        "fig4" => (
            "near-resonant probe transmission at tau0 = -0.5, 0, 0.5, z = 1",
            [-0.5, 0.0, 0.5]
                .into_iter()
                .map(|t| {
                    broadband(
                        format!("fig4_tau0_{}", signed(t)),
                        t,
                        1.0,
                        Vec::new(),
                        &[Emit::Transmission, Emit::Features, Emit::Diagnostics],
                    )
                })
                .collect(),
        ),
        "fig5" => (
            "probe transmission at z = 0.5 and 2 for tau0 = 0.5, -0.5",
            [0.5, -0.5]
                .into_iter()
                .map(|t| {
                    broadband(
                        format!("fig5_tau0_{}", signed(t)),
                        t,
                        2.0,
                        vec![0.5],
                        &[Emit::Transmission, Emit::Features, Emit::Diagnostics],
                    )
                })
                .collect(),
        ),
        "fig6" => (
            "probe field in time at tau0 = -0.5, 0.5, z = 1",
            [-0.5, 0.5]
                .into_iter()
                .map(|t| {
                    broadband(
                        format!("fig6_tau0_{}", signed(t)),
                        t,
                        1.0,
                        Vec::new(),
                        &[Emit::Fields, Emit::Nodes, Emit::Diagnostics],
                    )
                })
                .collect(),
        ),
        "fig7" => (
            "narrow-band detuned probe spectra at z = 1",
            vec![narrowband("fig7".into(), 1.0, Vec::new())],
        ),
        "fig8" => (
            "narrow-band detuned probe spectra at z = 0.1, 0.5, 2",
            vec![narrowband("fig8".into(), 2.0, vec![0.1, 0.5])],
        ),
        other => {
            return Err(CliError::Config(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(Preset {
        name: name.to_string(),
        description: description.to_string(),
        runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_is_valid() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert!(!p.runs.is_empty());
            for run in &p.runs {
                run.validate().unwrap_or_else(|e| panic!("{}: {e}", run.label));
                assert!(run.label.starts_with(name));
            }
        }
        assert!(preset("fig9").is_err());
    }

    #[test]
    fn figure_parameters() {
        let fig2 = preset("fig2").unwrap();
        let deltas: Vec<f64> = fig2.runs.iter().map(|r| r.pump.detuning).collect();
        assert_eq!(deltas, vec![0.0, 0.5, 1.0]);
        assert!(fig2.runs.iter().all(|r| r.pump.spectral_fwhm == 1.0 && r.solver.z_max == 1.0));
        assert!(fig2.runs.iter().all(|r| r.medium.gamma2 == 1e-3));

        let fig4 = preset("fig4").unwrap();
        let delays: Vec<f64> = fig4.runs.iter().map(|r| r.probe.unwrap().delay).collect();
        assert_eq!(delays, vec![-0.5, 0.0, 0.5]);

        let fig5 = preset("fig5").unwrap();
        assert!(fig5.runs.iter().all(|r| r.depths() == vec![0.5, 2.0]));

        let probe = preset("fig7").unwrap().runs[0].probe.unwrap();
        assert_eq!((probe.spectral_fwhm, probe.detuning, probe.delay), (1.0, 2.5, 0.0));
        assert_eq!(preset("fig8").unwrap().runs[0].depths(), vec![0.1, 0.5, 2.0]);

        let g2: Vec<f64> = preset("fig1").unwrap().runs.iter().map(|r| r.medium.gamma2).collect();
        assert_eq!(g2, vec![1.1, 0.15, 0.0]);

        let fig3 = &preset("fig3").unwrap().runs[0];
        assert_eq!(fig3.pump.area, 0.49 * PI);
        assert_eq!(fig3.medium.gamma1, 1e-3);
        assert!((fig3.geometry.angle - 1f64.to_radians()).abs() < 1e-15);
    }
}
