//! Executes run configurations and collects their output files.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use mbring::analysis::{
    feature_report, find_beat_nodes, find_ringing_nodes, spectral_extrema, spectrum, transmission, FeatureReport,
    FeatureSettings, Spectrum, TransmissionCurve,
};
use mbring::lindisp::{
    coupling_diagnostics, group_velocity, interference_spectrum, linear_transmission, propagate_fourier,
    propagate_spectrum, ringing_kernel, wavevector, CouplingDiagnostics, DEFAULT_RINGING_MARGIN,
};
use mbring::mbsolver::{simulate_pump_probe, simulate_single_beam, SolverDiagnostics, Trajectory};
use mbring::{gaussian_pulse, pulse_energy, ComplexEnvelope, MediumParams, PulseSpec, TimeGrid};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{Emit, Pipeline, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{
    field_table, spectrum_table, transmission_table, write_file, RunManifest, RunRecord, Status, Table,
    TOOL_VERSION,
};
use crate::plot::LinePlot;

/// A file produced by a run, not yet written.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub contents: Vec<u8>,
}

/// Everything a successful run produces.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub artifacts: Vec<Artifact>,
    pub warnings: Vec<String>,
}

impl RunOutput {
    fn table(&mut self, name: String, table: Table) {
        self.artifacts.push(Artifact {
            name,
            contents: table.as_str().as_bytes().to_vec(),
        });
    }

    fn json(&mut self, name: String, value: &impl Serialize) {
        let text = serde_json::to_string_pretty(value).expect("run summaries are always serializable") + "\n";
        self.artifacts.push(Artifact {
            name,
            contents: text.into_bytes(),
        });
    }

    fn plot(&mut self, name: String, plot: &LinePlot) {
        self.artifacts.push(Artifact {
            name,
            contents: plot.to_svg().into_bytes(),
        });
    }
}

/// Short depth tag used in file names.
fn ztag(z: f64) -> String {
    format!("z{z}")
}

struct Context<'a> {
    config: &'a RunConfig,
    emit: &'a BTreeSet<Emit>,
    plot: bool,
    out: RunOutput,
}

impl Context<'_> {
    fn wants(&self, kind: Emit) -> bool {
        self.emit.contains(&kind)
    }

    fn name(&self, rest: &str) -> String {
        format!("{}_{rest}", self.config.label)
    }

    fn node_t_min(&self, beam: &PulseSpec) -> CliResult<f64> {
        match self.config.analysis.node_t_min {
            Some(t) => Ok(t),
            None => Ok(beam.peak_time() + 3.0 * beam.width()?),
        }
    }

    fn features(&self) -> FeatureSettings {
        FeatureSettings {
            window: self.config.analysis.window,
            ..FeatureSettings::for_medium(self.config.medium.gamma2)
        }
    }
}

#[derive(Serialize)]
struct NodeSummary {
    z: f64,
    t_min: f64,
    nodes: Vec<f64>,
    beat_nodes: Vec<f64>,
}

#[derive(Serialize)]
struct FeatureSummary {
    z: f64,
    report: Option<FeatureReport>,
    error: Option<String>,
    spectral_extrema: usize,
    energy_ratio: f64,
}

#[derive(Serialize)]
struct DepthDiagnostics {
    z: f64,
    coupling: CouplingDiagnostics,
    optical_density: f64,
    energy: f64,
}

/// Runs one configuration in memory.
pub fn compute(config: &RunConfig, force_plot: bool) -> CliResult<RunOutput> {
    config.validate()?;
    let mut ctx = Context {
        config,
        emit: &config.outputs.emit,
        plot: force_plot || config.outputs.plot,
        out: RunOutput::default(),
    };
    match config.pipeline() {
        Pipeline::Dispersion => dispersion(&mut ctx)?,
        Pipeline::Ringing => ringing(&mut ctx)?,
        Pipeline::Linear => linear(&mut ctx)?,
        Pipeline::SingleBeam => single_beam(&mut ctx)?,
        Pipeline::PumpProbe => pump_probe(&mut ctx)?,
        Pipeline::Interference => interference(&mut ctx)?,
    }
    Ok(ctx.out)
}

fn dispersion(ctx: &mut Context) -> CliResult<()> {
    let a = &ctx.config.analysis;
    let medium = &ctx.config.medium;
    let z = ctx.config.solver.z_max;
    let n = a.omega_points;
    let omegas: Vec<f64> = (0..n)
        .map(|m| -a.omega_max + 2.0 * a.omega_max * m as f64 / (n - 1) as f64)
        .collect();
    let mut table = Table::new(&["omega_over_wc", "re_ck", "im_ck", "group_velocity", "linear_transmission"]);
    let mut re_k = Vec::with_capacity(n);
    let mut v_g = Vec::with_capacity(n);
    for &w in &omegas {
        let ck = wavevector(w, medium).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
        let vg = group_velocity(w, medium).unwrap_or(f64::NAN);
        table.row(&[w, ck.re, ck.im, vg, linear_transmission(w, z, medium)]);
        re_k.push((w, ck.re));
        v_g.push((w, vg));
    }
    if ctx.wants(Emit::Spectra) {
        let name = ctx.name("dispersion.csv");
        ctx.out.table(name, table);
        if ctx.plot {
            let mut p = LinePlot::new("linear dispersion", "omega / omega_c", "c Re k / omega_c");
            p.add(format!("gamma2 = {}", medium.gamma2), re_k);
            let name = ctx.name("dispersion.svg");
            ctx.out.plot(name, &p);
            let mut p = LinePlot::new("group velocity", "omega / omega_c", "V_g / c");
            p.add(format!("gamma2 = {}", medium.gamma2), v_g);
            let name = ctx.name("group_velocity.svg");
            ctx.out.plot(name, &p);
        }
    }
    if ctx.wants(Emit::Diagnostics) {
        let diag = coupling_diagnostics(medium, z, DEFAULT_RINGING_MARGIN)?;
        let name = ctx.name("diagnostics.json");
        ctx.out.json(name, &json!({ "z": z, "coupling": diag }));
    }
    Ok(())
}

fn ringing(ctx: &mut Context) -> CliResult<()> {
    let grid = ctx.config.grid;
    let medium = ctx.config.medium;
    let mut nodes = Vec::new();
    let mut plot = LinePlot::new("ringing kernel", "omega_c tau", "|K|").log_y();
    for z in ctx.config.depths() {
        let kernel = ComplexEnvelope::from_fn(grid, |t| {
            let tau = t - grid.t_start;
            Complex64::new(ringing_kernel(tau, z, &medium), 0.0)
        });
        if ctx.wants(Emit::Fields) {
            let mut t = Table::new(&["tau_wc", "kernel"]);
            for (tau, v) in kernel.times().zip(&kernel.samples) {
                t.row(&[tau - grid.t_start, v.re]);
            }
            let name = ctx.name(&format!("kernel_{}.csv", ztag(z)));
            ctx.out.table(name, t);
        }
        if ctx.wants(Emit::Nodes) {
            let t_min = ctx.config.analysis.node_t_min.unwrap_or(0.0);
            nodes.push(NodeSummary {
                z,
                t_min,
                nodes: find_ringing_nodes(&kernel, t_min + grid.t_start)
                    .into_iter()
                    .map(|t| t - grid.t_start)
                    .collect(),
                beat_nodes: Vec::new(),
            });
        }
        plot.add(ztag(z), kernel.times().map(|t| t - grid.t_start).zip(kernel.abs()).collect());
    }
    if ctx.wants(Emit::Nodes) {
        let name = ctx.name("nodes.json");
        ctx.out.json(name, &nodes);
    }
    if ctx.plot && ctx.wants(Emit::Fields) {
        let name = ctx.name("kernel.svg");
        ctx.out.plot(name, &plot);
    }
    Ok(())
}

/// Envelopes of one beam at the entrance and at every reported depth.
struct Beam<'a> {
    tag: &'a str,
    spec: PulseSpec,
    input: ComplexEnvelope,
    outputs: Vec<(f64, ComplexEnvelope)>,
}

fn linear(ctx: &mut Context) -> CliResult<()> {
    let cfg = ctx.config;
    let input = gaussian_pulse(&cfg.pump, &cfg.grid)?;
    ctx.out.warnings.extend(cfg.pump.warnings());
    let outputs = cfg
        .depths()
        .into_iter()
        .map(|z| Ok((z, propagate_fourier(&input, z, &cfg.medium)?)))
        .collect::<CliResult<Vec<_>>>()?;
    let beam = Beam {
        tag: "pump",
        spec: cfg.pump,
        input,
        outputs,
    };
    report_beam(ctx, &beam, true)?;
    report_depths(ctx, &beam, None)
}

fn outputs_at(config: &RunConfig, traj: &Trajectory, fields: &[ComplexEnvelope]) -> Vec<(f64, ComplexEnvelope)> {
    config
        .depths()
        .into_iter()
        .map(|z| (z, fields[traj.nearest(z)].clone()))
        .collect()
}

fn solver_config(config: &RunConfig) -> mbring::mbsolver::SolverConfig {
    let mut solver = config.solver.clone();
    solver.snapshots = config.outputs.z_cuts.clone();
    solver
}

fn single_beam(ctx: &mut Context) -> CliResult<()> {
    let cfg = ctx.config;
    let input = gaussian_pulse(&cfg.pump, &cfg.grid)?;
    ctx.out.warnings.extend(cfg.pump.warnings());
    let traj = simulate_single_beam(&input, &cfg.medium, &solver_config(cfg), &cfg.grid)?;
    ctx.out.warnings.extend(traj.warnings.iter().cloned());
    let beam = Beam {
        tag: "pump",
        spec: cfg.pump,
        outputs: outputs_at(cfg, &traj, &traj.pump_fields),
        input,
    };
    report_beam(ctx, &beam, true)?;
    report_depths(ctx, &beam, Some(traj.diagnostics))
}

fn pump_probe(ctx: &mut Context) -> CliResult<()> {
    let cfg = ctx.config;
    let probe_spec = cfg.probe.expect("validated: pump_probe has a probe");
    let pump_in = gaussian_pulse(&cfg.pump, &cfg.grid)?;
    let probe_in = gaussian_pulse(&probe_spec, &cfg.grid)?;
    ctx.out.warnings.extend(cfg.pump.warnings());
    ctx.out.warnings.extend(probe_spec.warnings());
    let traj = simulate_pump_probe(&pump_in, &probe_in, &cfg.geometry, &cfg.medium, &solver_config(cfg), &cfg.grid)?;
    ctx.out.warnings.extend(traj.warnings.iter().cloned());
    let pump = Beam {
        tag: "pump",
        spec: cfg.pump,
        outputs: outputs_at(cfg, &traj, &traj.pump_fields),
        input: pump_in,
    };
    let probe = Beam {
        tag: "probe",
        spec: probe_spec,
        outputs: outputs_at(cfg, &traj, &traj.probe_fields),
        input: probe_in,
    };
    report_beam(ctx, &pump, false)?;
    report_beam(ctx, &probe, true)?;
    report_depths(ctx, &probe, Some(traj.diagnostics))
}

/// Fields, spectra and nodes of one beam; transmission and features only
/// for the analysed beam.
fn report_beam(ctx: &mut Context, beam: &Beam, analysed: bool) -> CliResult<()> {
    let tag = beam.tag;
    if ctx.wants(Emit::Fields) {
        let name = ctx.name(&format!("{tag}_field_in.csv"));
        ctx.out.table(name, field_table(&beam.input));
        for (z, env) in &beam.outputs {
            let name = ctx.name(&format!("{tag}_field_{}.csv", ztag(*z)));
            ctx.out.table(name, field_table(env));
        }
        if ctx.plot {
            let mut p = LinePlot::new(&format!("{tag} field"), "omega_c tau", "|Omega|").log_y();
            p.add("input", beam.input.times().zip(beam.input.abs()).collect());
            for (z, env) in &beam.outputs {
                p.add(ztag(*z), env.times().zip(env.abs()).collect());
            }
            let name = ctx.name(&format!("{tag}_fields.svg"));
            ctx.out.plot(name, &p);
        }
    }
    let spec_in = spectrum(&beam.input);
    let spectra: Vec<(f64, Spectrum)> = beam.outputs.iter().map(|(z, env)| (*z, spectrum(env))).collect();
    let span = 2.0 * ctx.config.analysis.window.max(beam.spec.spectral_fwhm) + beam.spec.detuning.abs();
    if ctx.wants(Emit::Spectra) {
        let name = ctx.name(&format!("{tag}_spectrum_in.csv"));
        ctx.out.table(name, spectrum_table(&spec_in));
        for (z, s) in &spectra {
            let name = ctx.name(&format!("{tag}_spectrum_{}.csv", ztag(*z)));
            ctx.out.table(name, spectrum_table(s));
        }
        if ctx.plot {
            let mut p = LinePlot::new(&format!("{tag} spectrum"), "omega / omega_c", "|F|")
                .log_y()
                .x_range(-span, span);
            p.add("input", spec_in.omegas().zip(spec_in.abs()).collect());
            for (z, s) in &spectra {
                p.add(ztag(*z), s.omegas().zip(s.abs()).collect());
            }
            let name = ctx.name(&format!("{tag}_spectra.svg"));
            ctx.out.plot(name, &p);
        }
    }
    if ctx.wants(Emit::Nodes) {
        let t_min = ctx.node_t_min(&beam.spec)?;
        let summary: Vec<NodeSummary> = beam
            .outputs
            .iter()
            .map(|(z, env)| NodeSummary {
                z: *z,
                t_min,
                nodes: find_ringing_nodes(env, t_min),
                beat_nodes: find_beat_nodes(env, t_min),
            })
            .collect();
        let name = ctx.name(&format!("{tag}_nodes.json"));
        ctx.out.json(name, &summary);
    }
    if !analysed {
        return Ok(());
    }
    let floor = ctx.config.analysis.floor;
    let window = ctx.config.analysis.window;
    let medium = ctx.config.medium;
    let mut curves = Vec::with_capacity(spectra.len());
    for (z, s) in &spectra {
        let curve = transmission(s, &spec_in, floor)?;
        let baseline = TransmissionCurve::linear_baseline(&curve, *z, &medium);
        curves.push((*z, curve, baseline));
    }
    if ctx.wants(Emit::Transmission) {
        for (z, curve, baseline) in &curves {
            let name = ctx.name(&format!("{tag}_transmission_{}.csv", ztag(*z)));
            ctx.out.table(name, transmission_table(curve, baseline));
        }
        if ctx.plot {
            let mut p = LinePlot::new(&format!("{tag} transmission"), "omega / omega_c", "|F_out / F_in|")
                .x_range(-window, window);
            for (z, curve, baseline) in &curves {
                let unmasked = |c: &TransmissionCurve| {
                    c.omegas()
                        .zip(&c.ratio)
                        .zip(&c.floor_mask)
                        .filter(|(_, &m)| !m)
                        .map(|((w, &r), _)| (w, r))
                        .collect::<Vec<_>>()
                };
                p.add(ztag(*z), unmasked(curve));
                p.add(format!("linear {}", ztag(*z)), unmasked(baseline));
            }
            let name = ctx.name(&format!("{tag}_transmission.svg"));
            ctx.out.plot(name, &p);
        }
    }
    if ctx.wants(Emit::Features) {
        let settings = ctx.features();
        let threshold = floor * spec_in.abs().into_iter().fold(0.0, f64::max);
        let e_in = pulse_energy(&beam.input);
        let summary: Vec<FeatureSummary> = curves
            .iter()
            .zip(&spectra)
            .zip(&beam.outputs)
            .map(|(((z, curve, baseline), (_, s)), (_, env))| {
                let (report, error) = match feature_report(curve, baseline, &settings) {
                    Ok(r) => (Some(r), None),
                    Err(e) => (None, Some(e.to_string())),
                };
                FeatureSummary {
                    z: *z,
                    report,
                    error,
                    spectral_extrema: spectral_extrema(s, window, threshold).len(),
                    energy_ratio: pulse_energy(env) / e_in,
                }
            })
            .collect();
        let name = ctx.name(&format!("{tag}_features.json"));
        ctx.out.json(name, &summary);
    }
    Ok(())
}

fn report_depths(ctx: &mut Context, beam: &Beam, solver: Option<SolverDiagnostics>) -> CliResult<()> {
    if !ctx.wants(Emit::Diagnostics) {
        return Ok(());
    }
    let medium = ctx.config.medium;
    let depths = beam
        .outputs
        .iter()
        .map(|(z, env)| {
            Ok(DepthDiagnostics {
                z: *z,
                coupling: coupling_diagnostics(&medium, *z, DEFAULT_RINGING_MARGIN)?,
                optical_density: if medium.gamma2 > 0.0 {
                    medium.optical_density(*z)
                } else {
                    f64::INFINITY
                },
                energy: pulse_energy(env),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    let doc = json!({
        "beam": beam.tag,
        "input_energy": pulse_energy(&beam.input),
        "depths": depths,
        "solver": solver,
        "warnings": ctx.out.warnings,
    });
    let name = ctx.name("diagnostics.json");
    ctx.out.json(name, &doc);
    Ok(())
}

/// Spectrum of the field propagated through the medium plus a copy of the
/// input delayed by `tau1` in vacuum.
pub fn composed_interference(
    pump: &PulseSpec,
    grid: &TimeGrid,
    z: f64,
    tau1: f64,
    medium: &MediumParams,
) -> CliResult<Spectrum> {
    let spec_in = spectrum(&gaussian_pulse(pump, grid)?);
    let through = propagate_spectrum(&spec_in, z, medium)?;
    let delayed = PulseSpec {
        delay: pump.delay + tau1,
        ..*pump
    };
    let replica = spectrum(&gaussian_pulse(&delayed, grid)?);
    Ok(Spectrum {
        values: through.values.iter().zip(&replica.values).map(|(a, b)| a + b).collect(),
        ..through
    })
}

fn interference(ctx: &mut Context) -> CliResult<()> {
    let cfg = ctx.config;
    let tau1 = cfg.analysis.tau1;
    let spec_in = spectrum(&gaussian_pulse(&cfg.pump, &cfg.grid)?);
    let floor = cfg.analysis.floor * spec_in.abs().into_iter().fold(0.0, f64::max);
    let zero = spec_in.zero_bin();
    let mut summary = Vec::new();
    let mut plot = LinePlot::new("interference spectrum", "omega / omega_c", "|F_+|");
    for z in cfg.depths() {
        let closed = interference_spectrum(&spec_in, z, tau1, &cfg.medium)?;
        let composed = composed_interference(&cfg.pump, &cfg.grid, z, tau1, &cfg.medium)?;
        let mut table = Table::new(&["omega_over_wc", "closed_form", "composed", "input_abs"]);
        let mut worst: f64 = 0.0;
        for m in 0..spec_in.n {
            let (c, s, i) = (closed[m], composed.values[m].norm(), spec_in.values[m].norm());
            table.row(&[spec_in.omega(m), c, s, i]);
            if Some(m) != zero && i >= floor {
                worst = worst.max((c - s).abs() / (2.0 * i));
            }
        }
        summary.push(json!({ "z": z, "tau1": tau1, "max_relative_deviation": worst }));
        if ctx.wants(Emit::Spectra) {
            let name = ctx.name(&format!("interference_{}.csv", ztag(z)));
            ctx.out.table(name, table);
        }
        let span = 2.0 * cfg.pump.spectral_fwhm;
        plot = plot.x_range(-span, span);
        plot.add(ztag(z), spec_in.omegas().zip(closed.iter().copied()).collect());
    }
    if ctx.wants(Emit::Diagnostics) {
        let name = ctx.name("diagnostics.json");
        ctx.out.json(name, &summary);
    }
    if ctx.plot && ctx.wants(Emit::Spectra) {
        let name = ctx.name("interference.svg");
        ctx.out.plot(name, &plot);
    }
    Ok(())
}

/// Runs `config` and writes its files into `dir`.
pub fn run(config: &RunConfig, dir: &Path, force_plot: bool) -> (RunRecord, Option<CliError>) {
    let mut record = RunRecord {
        label: config.label.clone(),
        status: Status::Ok,
        error: None,
        config: config.clone(),
        files: Vec::new(),
        warnings: Vec::new(),
    };
    let result = compute(config, force_plot).and_then(|out| {
        record.warnings = out.warnings;
        for a in &out.artifacts {
            record.files.push(write_file(dir, &a.name, &a.contents)?);
        }
        Ok(())
    });
    match result {
        Ok(()) => (record, None),
        Err(e) => {
            log::error!("{}: {e}", config.label);
            record.status = Status::Failed;
            record.error = Some(e.to_string());
            (record, Some(e))
        }
    }
}

/// Runs every configuration in parallel and writes the manifest, also when
/// some runs fail. Returns the first failure in run order.
pub fn run_all(
    command: &str,
    configs: &[RunConfig],
    dir: &Path,
    threads: usize,
    force_plot: bool,
) -> (RunManifest, Option<CliError>) {
    let start = Instant::now();
    let mut manifest = RunManifest {
        tool: "mbring".into(),
        version: TOOL_VERSION.into(),
        command: command.into(),
        status: Status::Ok,
        wall_time_s: 0.0,
        threads,
        runs: Vec::new(),
    };
    if let Err(e) = std::fs::create_dir_all(dir) {
        return (manifest_failed(manifest, start), Some(CliError::io(dir, e)));
    }
    let mut failure = check_labels(configs).err();
    if failure.is_none() {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
        let results: Vec<(RunRecord, Option<CliError>)> = match pool {
            Ok(pool) => pool.install(|| configs.par_iter().map(|c| run(c, dir, force_plot)).collect()),
            Err(e) => return (manifest_failed(manifest, start), Some(CliError::Config(e.to_string()))),
        };
        for (record, err) in results {
            if failure.is_none() {
                failure = err;
            }
            manifest.runs.push(record);
        }
    }
    if failure.is_some() {
        manifest.status = Status::Failed;
    }
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    if let Err(e) = manifest.write(dir) {
        failure.get_or_insert(e);
    }
    (manifest, failure)
}

fn manifest_failed(mut manifest: RunManifest, start: Instant) -> RunManifest {
    manifest.status = Status::Failed;
    manifest.wall_time_s = start.elapsed().as_secs_f64();
    manifest
}

fn check_labels(configs: &[RunConfig]) -> CliResult<()> {
    let mut seen = BTreeSet::new();
    for c in configs {
        if !seen.insert(c.label.as_str()) {
            return Err(CliError::Config(format!("duplicate run label {:?}", c.label)));
        }
    }
    Ok(())
}
