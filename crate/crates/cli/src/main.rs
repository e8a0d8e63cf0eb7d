use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use mbring_cli::config::parse_assignment;
use mbring_cli::{parse_sweep_axis, preset, run_all, CliError, CliResult, Pipeline, RunConfig, Status, PRESET_NAMES};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "mbring", version = env!("MBRING_VERSION"), about = "Pump-probe propagation in dense resonant media")]
struct Cli {
    /// Output directory
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Also write SVG plots
    #[arg(long, global = true)]
    plot: bool,

    /// Worker threads for independent runs (0 = all cores)
    #[arg(long, global = true, env = "MBRING_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Default)]
struct RunArgs {
    /// JSON run configuration; defaults are used for anything omitted
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override a configuration field, e.g. `--set pump.delay=-0.5`
    #[arg(long = "set", value_name = "PATH=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Linear dispersion and group velocity of the medium
    Dispersion(RunArgs),
    /// Bessel impulse response of the medium
    Ring(RunArgs),
    /// Propagate the pump alone (linear theory unless --nonlinear)
    Propagate {
        #[command(flatten)]
        args: RunArgs,
        /// Use the Maxwell-Bloch solver instead of the linear transfer function
        #[arg(long)]
        nonlinear: bool,
    },
    /// Nonlinear pump with a weak probe
    Pumpprobe(RunArgs),
    /// Ringing interfering with a vacuum-delayed replica (gamma2 = 0)
    Interfere {
        #[command(flatten)]
        args: RunArgs,
        /// Vacuum delay of the replica
        #[arg(long)]
        tau1: Option<f64>,
    },
    /// Run every curve of a figure preset
    Preset {
        /// One of fig1 .. fig8
        name: Option<String>,
        /// Print the preset configurations as JSON instead of running them
        #[arg(long)]
        print: bool,
        /// List preset names
        #[arg(long)]
        list: bool,
        /// Override a field in every run of the preset
        #[arg(long = "set", value_name = "PATH=VALUE")]
        set: Vec<String>,
    },
    /// Cartesian product over listed parameter values, run in parallel
    Sweep {
        #[command(flatten)]
        args: RunArgs,
        /// Swept field and its values, e.g. `--axis pump.delay=-0.5,0,0.5`
        #[arg(long = "axis", value_name = "PATH=V1,V2,...", required = true)]
        axes: Vec<String>,
    },
}

fn base_config(args: &RunArgs, pipeline: Option<Pipeline>) -> CliResult<RunConfig> {
    let mut config = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = pipeline {
        config.pipeline = Some(p);
    }
    apply_sets(&config, &args.set)
}

fn apply_sets(config: &RunConfig, sets: &[String]) -> CliResult<RunConfig> {
    let overrides = sets.iter().map(|s| parse_assignment(s)).collect::<CliResult<Vec<_>>>()?;
    config.with_overrides(&overrides)
}

fn sweep(base: &RunConfig, axes: &[String]) -> CliResult<Vec<RunConfig>> {
    let axes = axes.iter().map(|a| parse_sweep_axis(a)).collect::<CliResult<Vec<_>>>()?;
    let mut points: Vec<Vec<(String, Value)>> = vec![Vec::new()];
    for (path, values) in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push((path.clone(), v.clone()));
                    q
                })
            })
            .collect();
    }
    points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut config = base.with_overrides(p)?;
            config.label = format!("{}_{i:03}", base.label);
            Ok(config)
        })
        .collect()
}

fn threads(requested: Option<usize>) -> usize {
    match requested {
        Some(n) if n > 0 => n,
        _ => std::thread::available_parallelism().map_or(1, |n| n.get()),
    }
}

fn execute(cli: Cli) -> CliResult<()> {
    let (name, configs) = match &cli.command {
        Command::Dispersion(args) => ("dispersion", vec![base_config(args, Some(Pipeline::Dispersion))?]),
        Command::Ring(args) => ("ring", vec![base_config(args, Some(Pipeline::Ringing))?]),
        Command::Propagate { args, nonlinear } => {
            let pipeline = if *nonlinear { Pipeline::SingleBeam } else { Pipeline::Linear };
            ("propagate", vec![base_config(args, Some(pipeline))?])
        }
        Command::Pumpprobe(args) => {
            let mut config = base_config(args, Some(Pipeline::PumpProbe))?;
            if config.probe.is_none() {
                config.probe = Some(mbring::PulseSpec {
                    area: 1e-3,
                    ..config.pump
                });
            }
            ("pumpprobe", vec![config])
        }
        Command::Interfere { args, tau1 } => {
            let mut config = base_config(args, Some(Pipeline::Interference))?;
            if let Some(t) = tau1 {
                config.analysis.tau1 = *t;
            }
            ("interfere", vec![config])
        }
        Command::Preset { name, print, list, set } => {
            if *list {
                for n in PRESET_NAMES {
                    println!("{n}\t{}", preset(n)?.description);
                }
                return Ok(());
            }
            let name = name
                .as_deref()
                .ok_or_else(|| CliError::Config("preset needs a name (or --list)".into()))?;
            let p = preset(name)?;
            let runs = p
                .runs
                .iter()
                .map(|r| apply_sets(r, set))
                .collect::<CliResult<Vec<_>>>()?;
            if *print {
                println!("{}", serde_json::to_string_pretty(&runs).expect("configs serialize"));
                return Ok(());
            }
            ("preset", runs)
        }
        Command::Sweep { args, axes } => ("sweep", sweep(&base_config(args, None)?, axes)?),
    };
    let n = threads(cli.threads);
    let (manifest, failure) = run_all(name, &configs, &cli.out, n, cli.plot);
    for run in &manifest.runs {
        for w in &run.warnings {
            eprintln!("warning [{}]: {w}", run.label);
        }
    }
    match failure {
        Some(e) => Err(e),
        None => {
            debug_assert_eq!(manifest.status, Status::Ok);
            let files: usize = manifest.runs.iter().map(|r| r.files.len()).sum();
            println!(
                "{} run(s), {files} file(s) in {} ({:.2} s)",
                manifest.runs.len(),
                cli.out.display(),
                manifest.wall_time_s
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
