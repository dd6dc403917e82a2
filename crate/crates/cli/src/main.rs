//! Command-line front end. CSV is the canonical output format: 17
//! significant digits, deterministic row order, byte-identical across
//! repeated runs. `--plot` additionally writes simple SVG line plots.

mod out;
mod plot;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use optoamp::config::{RunConfig, Units};
use optoamp::figures::{mech_curve, modulation_curve, reflection_curve};
use optoamp::oracle::{integrate, output_psd, SimConfig};
use optoamp::output::{Efficiencies, Port};
use optoamp::params::SystemParams;
use optoamp::presets;
use optoamp::sensing::{numeric_optimize, sql_limits, ForceDrive, SearchConfig};
use optoamp::spectra::{
    force_spectrum, omega_grid_uniform, omit_trace, thermal_spectrum, vacuum_spectrum,
    NoiseModel, SpectrumTable, SpectrumUnits,
};

use out::{fmt, Csv};

#[derive(Parser)]
#[command(
    name = "optoamp",
    about = "Linear-amplifier model of a driven optomechanical cavity",
    version
)]
struct Cli {
    /// JSON run configuration; figure-style presets are used when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory for CSV (and SVG) files
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,

    /// Frequency-grid override: omega=<start:stop:n> (kappa units)
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<GridSpec>,

    /// Number of quadrature angles over [0, pi)
    #[arg(long, global = true)]
    theta: Option<usize>,

    /// Unit system of the config file (overrides its "units" field)
    #[arg(long, global = true, value_enum)]
    units: Option<UnitArg>,

    /// Write an SVG line plot next to each CSV
    #[arg(long, global = true)]
    plot: bool,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the derived scalar quantities (cooperativity, D_opt, omega_eff, ...) as JSON
    Derive,
    /// Intracavity modulation-transfer or mechanical-transduction element powers
    Response {
        #[arg(long, value_enum, default_value_t = Channel::Optical)]
        channel: Channel,
    },
    /// Single-sideband probe transmission: raw gain, empty-cavity gain, and their ratio
    Omit,
    /// Element powers of the reflection modulation matrix at the detection port
    Reflect,
    /// Vacuum-driven quadrature noise spectrum over (omega, theta)
    Squeeze,
    /// Thermal (mechanically driven) output spectrum in the two principal quadratures
    Thermal,
    /// Transduced external-force spectrum at a fixed quadrature angle
    Force {
        /// Detection quadrature angle in radians
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        angle: f64,
    },
    /// Print the on-resonance standard-quantum-limit figures as JSON
    Sql,
    /// Maximize force-detection SNR over (cooperativity, quadrature) per frequency
    Optimize {
        /// Also sweep detuning over [-6, -0.5] kappa in addition to 0
        #[arg(long)]
        delta_sweep: bool,
    },
    /// Stochastic time-domain run: state trajectory plus estimated output PSD.
    /// Default budget: ~1e6 Euler steps per trajectory, a few seconds total.
    Simulate {
        /// Detection quadrature angle for the PSD, in radians
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        angle: f64,
    },
    /// Preset parameter bundles: 2 = modulation, 3 = transparency dip,
    /// 4 = mechanical transduction, 5 = reflection, 6 = squeezing,
    /// 7 = force sensing optimum
    Figure { id: u32 },
}

#[derive(Clone, Copy, ValueEnum)]
enum Channel {
    Optical,
    Mechanical,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitArg {
    Kappa,
    Si,
}

#[derive(Clone, Copy, Debug)]
struct GridSpec {
    lo: f64,
    hi: f64,
    n: usize,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let body = s
        .strip_prefix("omega=")
        .ok_or_else(|| format!("expected omega=<start:stop:n>, got {s}"))?;
    let parts: Vec<&str> = body.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("expected omega=<start:stop:n>, got {s}"));
    }
    let lo: f64 = parts[0].parse().map_err(|e| format!("start: {e}"))?;
    let hi: f64 = parts[1].parse().map_err(|e| format!("stop: {e}"))?;
    let n: usize = parts[2].parse().map_err(|e| format!("n: {e}"))?;
    if !(hi > lo) || n < 2 {
        return Err("need stop > start and n >= 2".into());
    }
    Ok(GridSpec { lo, hi, n })
}

/// Everything a subcommand needs, resolved from either a config file or a
/// figure-style preset, together with `# source:` provenance lines.
struct Ctx {
    params: SystemParams,
    noise: NoiseModel,
    drive: ForceDrive,
    sim: SimConfig,
    source: Vec<String>,
}

fn preset_source(omega_m_over_kappa: f64) -> String {
    format!(
        "preset: omega_m/kappa={omega_m_over_kappa}, Q={}, D_opt={}, \
         detuning=-(omega_m + 0.5 kappa), one-sided lossless, ideal detection",
        presets::Q,
        presets::D_OPT
    )
}

fn omit_source() -> String {
    format!(
        "preset: resolved sideband, omega_m/kappa=5, Q={}, D_opt={}, \
         detuning=-omega_m, one-sided lossless, ideal detection",
        presets::Q,
        presets::D_OPT
    )
}

fn param_source(p: &SystemParams) -> String {
    format!(
        "kappa-units parameters: detuning={}, omega_m={}, gamma_m={}, g_c={}, \
         ports=({},{},{}), eps_det={}",
        p.detuning,
        p.omega_m,
        p.gamma_m,
        p.g_c,
        p.gamma_left,
        p.gamma_right,
        p.gamma_vac,
        p.eps_det
    )
}

fn load_ctx(cli: &Cli, preset: SystemParams, preset_line: String) -> Result<Ctx, optoamp::Error> {
    match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| optoamp::Error::Config(format!("{}: {e}", path.display())))?;
            let mut cfg = RunConfig::from_json(&text)?;
            if let Some(u) = cli.units {
                cfg.units = match u {
                    UnitArg::Kappa => Units::Kappa,
                    UnitArg::Si => Units::Si,
                };
            }
            let params = cfg.params()?;
            let source = vec![
                format!("config {}", path.display()),
                param_source(&params),
            ];
            Ok(Ctx {
                params,
                noise: cfg.noise(),
                drive: cfg.force_drive(),
                sim: cfg.sim(),
                source,
            })
        }
        None => Ok(Ctx {
            source: vec![preset_line, param_source(&preset)],
            params: preset,
            noise: NoiseModel::vacuum(),
            drive: ForceDrive::from_momentum_scale(1.0, 1.0, 1.0),
            sim: SimConfig::default(),
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(n) = std::env::var("OPTOMECH_THREADS") {
        if let Ok(n) = n.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", serde_json::json!({ "error": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}

fn omega_grid(cli: &Cli, default: Vec<f64>) -> Vec<f64> {
    match cli.grid {
        Some(g) => omega_grid_uniform(g.lo, g.hi, g.n),
        None => default,
    }
}

fn theta_grid(cli: &Cli, default: Vec<f64>) -> Vec<f64> {
    match cli.theta {
        Some(n) => (0..n)
            .map(|i| std::f64::consts::PI * i as f64 / n as f64)
            .collect(),
        None => default,
    }
}

fn emit(cli: &Cli, name: &str, csv: &Csv) -> Result<(), optoamp::Error> {
    let path = cli.out.join(name);
    csv.write(&path)
        .map_err(|e| optoamp::Error::Config(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    if cli.plot {
        emit_plot(&path, csv)?;
    }
    Ok(())
}

fn emit_plot(csv_path: &Path, csv: &Csv) -> Result<(), optoamp::Error> {
    let cols: Vec<&str> = csv.header.split(',').collect();
    let xs = csv.column(0);
    if xs.len() < 2 {
        return Ok(());
    }
    let mut series = Vec::new();
    for (i, name) in cols.iter().enumerate().skip(1) {
        let ys = csv.column(i);
        if ys.len() == xs.len() {
            series.push((name.to_string(), ys));
        }
    }
    if series.is_empty() {
        return Ok(());
    }
    let path = csv_path.with_extension("svg");
    let title = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    plot::line_svg(&path, &title, &xs, &series)
        .map_err(|e| optoamp::Error::Config(format!("{}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn spectrum_csv(source: &[String], table: &SpectrumTable, tag: &str) -> Csv {
    let units = match table.units {
        SpectrumUnits::RelativeShotNoise => "rel_shot",
        SpectrumUnits::Quanta => "quanta",
    };
    let mut lines = Vec::with_capacity(table.omegas.len() * table.thetas.len());
    for (iw, &w) in table.omegas.iter().enumerate() {
        for (it, &t) in table.thetas.iter().enumerate() {
            lines.push(format!(
                "{},{},{},{units},{tag}",
                fmt(w),
                fmt(t),
                fmt(table.value(iw, it))
            ));
        }
    }
    Csv {
        source: source.to_vec(),
        header: "omega_over_kappa,theta_rad,value,units,tag".into(),
        lines,
    }
}

fn optimize_rows(
    p: &SystemParams,
    omegas: &[f64],
    deltas: &[f64],
    drive: &ForceDrive,
) -> Vec<Vec<f64>> {
    let cfg = SearchConfig::default();
    let cells: Vec<(f64, f64)> = omegas
        .iter()
        .flat_map(|&w| deltas.iter().map(move |&d| (w, d)))
        .collect();
    cells
        .par_iter()
        .map(|&(w, d)| match numeric_optimize(p, w, d, drive, Port::Right, &cfg) {
            Ok(opt) => vec![w, d, opt.theta, opt.c_opt, opt.snr, 1.0],
            Err(_) => vec![w, d, f64::NAN, f64::NAN, f64::NAN, 0.0],
        })
        .collect()
}

fn run(cli: &Cli) -> Result<(), optoamp::Error> {
    match &cli.cmd {
        Cmd::Derive => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let text = serde_json::to_string_pretty(&ctx.params.derived())
                .map_err(|e| optoamp::Error::Config(e.to_string()))?;
            println!("{text}");
        }
        Cmd::Response { channel } => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let grid = omega_grid(cli, presets::response_grid());
            match channel {
                Channel::Optical => {
                    let rows: Vec<Vec<f64>> = modulation_curve(&ctx.params, &grid)?
                        .iter()
                        .map(|r| r.to_vec())
                        .collect();
                    emit(
                        cli,
                        "response_modulation.csv",
                        &Csv::wide(
                            &ctx.source,
                            "omega_over_kappa,mt_pp,mt_pm,mt_mp,mt_mm",
                            &rows,
                        ),
                    )?;
                }
                Channel::Mechanical => {
                    let rows: Vec<Vec<f64>> = mech_curve(&ctx.params, &grid)?
                        .iter()
                        .map(|r| r.to_vec())
                        .collect();
                    emit(
                        cli,
                        "response_mech.csv",
                        &Csv::wide(&ctx.source, "omega_over_kappa,am_power,pm_power", &rows),
                    )?;
                }
            }
        }
        Cmd::Omit => {
            let ctx = load_ctx(cli, presets::omit_preset(), omit_source())?;
            let grid = omega_grid(cli, presets::omit_grid());
            let rows: Vec<Vec<f64>> = omit_trace(&ctx.params, &grid)?
                .iter()
                .map(|pt| vec![pt.omega, pt.raw, pt.empty, pt.ratio])
                .collect();
            emit(
                cli,
                "omit.csv",
                &Csv::wide(&ctx.source, "omega_over_kappa,raw,empty,ratio", &rows),
            )?;
        }
        Cmd::Reflect => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let grid = omega_grid(cli, presets::response_grid());
            let rows: Vec<Vec<f64>> = reflection_curve(&ctx.params, &grid, Port::Right)?
                .iter()
                .map(|r| r.to_vec())
                .collect();
            emit(
                cli,
                "reflect.csv",
                &Csv::wide(&ctx.source, "omega_over_kappa,r_pp,r_pm,r_mp,r_mm", &rows),
            )?;
        }
        Cmd::Squeeze => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let (w_def, t_def) = presets::squeeze_grids();
            let omegas = omega_grid(cli, w_def);
            let thetas = theta_grid(cli, t_def);
            let table = vacuum_spectrum(&ctx.params, &omegas, &thetas, Port::Right)?;
            emit(cli, "squeeze.csv", &spectrum_csv(&ctx.source, &table, "vacuum"))?;
            let eff = Efficiencies::from_params(&ctx.params, Port::Right)?;
            if eff.eps_tot() < 1.0 {
                let observed = table.observed(&eff);
                emit(
                    cli,
                    "squeeze_observed.csv",
                    &spectrum_csv(&ctx.source, &observed, "vacuum_observed"),
                )?;
            }
        }
        Cmd::Thermal => {
            let ctx = load_ctx(cli, presets::omit_preset(), omit_source())?;
            let grid = omega_grid(cli, presets::thermal_grid());
            let table = thermal_spectrum(&ctx.params, &grid, &ctx.noise, Port::Right)?;
            emit(cli, "thermal.csv", &spectrum_csv(&ctx.source, &table, "thermal"))?;
        }
        Cmd::Force { angle } => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let grid = omega_grid(cli, presets::response_grid());
            let values = force_spectrum(&ctx.params, &grid, *angle, &ctx.drive, Port::Right)?;
            let lines: Vec<String> = grid
                .iter()
                .zip(&values)
                .map(|(&w, &v)| format!("{},{},{},quanta,force", fmt(w), fmt(*angle), fmt(v)))
                .collect();
            emit(
                cli,
                "force.csv",
                &Csv {
                    source: ctx.source.clone(),
                    header: "omega_over_kappa,theta_rad,value,units,tag".into(),
                    lines,
                },
            )?;
        }
        Cmd::Sql => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let limits = sql_limits(&ctx.params, &ctx.drive, ctx.noise.n_th);
            let text = serde_json::to_string_pretty(&limits)
                .map_err(|e| optoamp::Error::Config(e.to_string()))?;
            println!("{text}");
        }
        Cmd::Optimize { delta_sweep } => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let wm = ctx.params.omega_m;
            let omegas = omega_grid(cli, omega_grid_uniform(0.1 * wm, 3.0 * wm, 30));
            let mut deltas = vec![0.0];
            if *delta_sweep {
                deltas.extend(omega_grid_uniform(-6.0, -0.5, 12));
            }
            let rows = optimize_rows(&ctx.params, &omegas, &deltas, &ctx.drive);
            emit(
                cli,
                "optimize.csv",
                &Csv::wide(
                    &ctx.source,
                    "omega,delta,theta_opt,c_opt,snr,converged",
                    &rows,
                ),
            )?;
        }
        Cmd::Simulate { angle } => {
            let ctx = load_ctx(cli, presets::squeeze_preset(), preset_source(0.2))?;
            let mut source = ctx.source.clone();
            source.push(format!(
                "sim: dt={}, duration={}, n_traj={}, seed={}, burn_in={}, decimate={}",
                ctx.sim.dt,
                ctx.sim.duration,
                ctx.sim.n_traj,
                ctx.sim.seed,
                ctx.sim.burn_in,
                ctx.sim.decimate
            ));
            let traj = integrate(&ctx.params, &ctx.noise, &ctx.sim)?;
            let rows: Vec<Vec<f64>> = (0..traj.channels[0].len())
                .map(|t| {
                    vec![
                        t as f64 * traj.dt,
                        traj.channels[0][t],
                        traj.channels[1][t],
                        traj.channels[2][t],
                        traj.channels[3][t],
                    ]
                })
                .collect();
            emit(
                cli,
                "trajectory.csv",
                &Csv::wide(&source, "time_kappa,a_plus,a_minus,z,p", &rows),
            )?;
            let n_samples = rows.len();
            let seg_len = (n_samples / 8).next_power_of_two() / 2;
            let seg_len = seg_len.clamp(64, 4096);
            let (freqs, psd) =
                output_psd(&ctx.params, &ctx.noise, Port::Right, *angle, &ctx.sim, seg_len)?;
            let psd_rows: Vec<Vec<f64>> =
                freqs.iter().zip(&psd).map(|(&f, &v)| vec![f, v]).collect();
            emit(
                cli,
                "sim_psd.csv",
                &Csv::wide(&source, "omega_over_kappa,psd", &psd_rows),
            )?;
        }
        Cmd::Figure { id } => run_figure(cli, *id)?,
    }
    Ok(())
}

fn case_tag(wm: f64) -> String {
    format!("wm{:02}", (wm * 10.0) as u32)
}

fn run_figure(cli: &Cli, id: u32) -> Result<(), optoamp::Error> {
    match id {
        2 => {
            let grid = presets::response_grid();
            for wm in presets::SIDEBAND_CASES {
                let p = presets::sideband_case(wm)?;
                let source = vec![preset_source(wm), param_source(&p)];
                let rows: Vec<Vec<f64>> = modulation_curve(&p, &grid)?
                    .iter()
                    .map(|r| r.to_vec())
                    .collect();
                emit(
                    cli,
                    &format!("figure2_modulation_{}.csv", case_tag(wm)),
                    &Csv::wide(&source, "omega_over_kappa,mt_pp,mt_pm,mt_mp,mt_mm", &rows),
                )?;
            }
        }
        3 => {
            let p = presets::omit_preset();
            let source = vec![omit_source(), param_source(&p)];
            let rows: Vec<Vec<f64>> = omit_trace(&p, &presets::omit_grid())?
                .iter()
                .map(|pt| vec![pt.omega, pt.raw, pt.empty, pt.ratio])
                .collect();
            emit(
                cli,
                "figure3_omit.csv",
                &Csv::wide(&source, "omega_over_kappa,raw,empty,ratio", &rows),
            )?;
        }
        4 => {
            let grid = presets::response_grid();
            for wm in presets::SIDEBAND_CASES {
                let p = presets::sideband_case(wm)?;
                let source = vec![preset_source(wm), param_source(&p)];
                let rows: Vec<Vec<f64>> =
                    mech_curve(&p, &grid)?.iter().map(|r| r.to_vec()).collect();
                emit(
                    cli,
                    &format!("figure4_mech_{}.csv", case_tag(wm)),
                    &Csv::wide(&source, "omega_over_kappa,am_power,pm_power", &rows),
                )?;
            }
        }
        5 => {
            let grid = presets::response_grid();
            for wm in presets::SIDEBAND_CASES {
                let p = presets::sideband_case(wm)?;
                let source = vec![preset_source(wm), param_source(&p)];
                let rows: Vec<Vec<f64>> = reflection_curve(&p, &grid, Port::Right)?
                    .iter()
                    .map(|r| r.to_vec())
                    .collect();
                emit(
                    cli,
                    &format!("figure5_reflection_{}.csv", case_tag(wm)),
                    &Csv::wide(&source, "omega_over_kappa,r_pp,r_pm,r_mp,r_mm", &rows),
                )?;
            }
        }
        6 => {
            let p = presets::squeeze_preset();
            let source = vec![preset_source(0.2), param_source(&p)];
            let (omegas, thetas) = presets::squeeze_grids();
            let table = vacuum_spectrum(&p, &omegas, &thetas, Port::Right)?;
            emit(cli, "figure6_squeeze.csv", &spectrum_csv(&source, &table, "vacuum"))?;
        }
        7 => {
            let p = presets::squeeze_preset();
            let source = vec![preset_source(0.2), param_source(&p)];
            let drive = ForceDrive::from_momentum_scale(1.0, 1.0, 1.0);
            let limits = sql_limits(&p, &drive, 0.0);
            let sql_rows = vec![
                vec![1.0, limits.r_therm],
                vec![2.0, limits.r_ext],
                vec![3.0, limits.c_sql],
            ];
            emit(
                cli,
                "figure7_sql.csv",
                &Csv::wide(
                    &source,
                    "quantity_id,value",
                    &sql_rows,
                ),
            )?;
            let omegas = omega_grid_uniform(0.1 * p.omega_m, 3.0 * p.omega_m, 25);
            let rows = optimize_rows(&p, &omegas, &[0.0], &drive);
            emit(
                cli,
                "figure7_optimum.csv",
                &Csv::wide(&source, "omega,delta,theta_opt,c_opt,snr,converged", &rows),
            )?;
        }
        other => {
            return Err(optoamp::Error::Config(format!(
                "figure id {other} not in 2..=7"
            )))
        }
    }
    Ok(())
}
