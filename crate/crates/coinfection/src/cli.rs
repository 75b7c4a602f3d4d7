//! Command-line interface: reduce, classify, simulate, sweep, validate.
//!
//! Every command reads a parameter file, prints a flat `key = value` report
//! to stdout, and optionally writes artifacts under `--out`. Files appear
//! atomically: content goes to a temporary name first, then a rename.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::read_params;
use crate::dynamics::{rhs_complete, rhs_reduced, State2, State3};
use crate::equilibria::classify;
use crate::error::{Error, Result};
use crate::integrate::{integrate, Options, Sampling, StopReason, Trajectory};
use crate::params::{compute_thresholds, reduce, Thresholds};
use crate::render::write_image;
use crate::sweep::{run_sweep, validate_aggregation, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "coinfection",
    version,
    about = "Two-timescale coinfection model: reduction, classification, sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Collapse the fast process and report the reduced coefficients and
    /// thresholds
    Reduce(ReduceArgs),
    /// Classify the phase portrait and list equilibria with stability
    Classify(ClassifyArgs),
    /// Integrate the complete or reduced dynamics from a given state
    Simulate(SimulateArgs),
    /// Classify every cell of a two-parameter grid
    Sweep(SweepArgs),
    /// Check that the complete dynamics converge to the reduced attractor
    /// as the timescales separate
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// parameter file
    #[arg(long)]
    pub params: PathBuf,
    /// directory for the report file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemKind {
    /// three compartments in fast time
    Complete,
    /// two compartments in slow time
    Reduced,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub params: PathBuf,
    #[arg(long, value_enum)]
    pub system: SystemKind,
    /// initial state: S,U,V for complete, S,I for reduced
    #[arg(long)]
    pub init: String,
    /// integration span in the chosen system's own time variable
    #[arg(long)]
    pub horizon: f64,
    /// relative,absolute tolerance pair
    #[arg(long)]
    pub tol: Option<String>,
    /// number of uniform output intervals
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// integrate the full horizon even if the state stops moving
    #[arg(long)]
    pub no_early_stop: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// two parameter names, x,y
    #[arg(long, default_value = "delta,lambda")]
    pub axes: String,
    /// x range lo,hi (cells sit at centers, edges are never evaluated)
    #[arg(long, default_value = "0,10")]
    pub range_x: String,
    /// y range lo,hi
    #[arg(long, default_value = "0,10")]
    pub range_y: String,
    /// grid resolution nx,ny
    #[arg(long, default_value = "200,200")]
    pub res: String,
    /// image path, .ppm or .svg
    #[arg(long)]
    pub image: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub params: PathBuf,
    /// comma-separated timescale separations to test
    #[arg(long, default_value = "1e-1,1e-2,1e-3")]
    pub epsilons: String,
    /// horizon in slow time units; each run gets horizon/epsilon fast time
    #[arg(long, default_value_t = 6.0)]
    pub horizon: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Reduce(a) => cmd_reduce(a),
        Command::Classify(a) => cmd_classify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate(a) => cmd_validate(a),
    }
}

fn parse_f64_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|tok| {
            tok.trim().parse().map_err(|_| {
                Error::IntegrationSetup(format!("cannot parse `{tok}` in {what} as a number"))
            })
        })
        .collect()
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64)> {
    match parse_f64_list(text, what)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        other => Err(Error::IntegrationSetup(format!(
            "{what} needs exactly two numbers, got {}",
            other.len()
        ))),
    }
}

/// Writes through a temporary file so readers never see partial content.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let stem = path
        .file_name()
        .ok_or_else(|| Error::IntegrationSetup(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", stem.to_string_lossy()));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

fn opt_num(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}"))
        .unwrap_or_else(|| "none".to_string())
}

fn threshold_lines(out: &mut String, th: &Thresholds) {
    writeln!(out, "S1 = {}", opt_num(th.s1_star)).unwrap();
    writeln!(out, "Abar = {}", opt_num(th.a_bar_thr)).unwrap();
    writeln!(out, "Bbar = {:.16e}", th.b_bar_thr).unwrap();
    writeln!(out, "R = {}", opt_num(th.r_script)).unwrap();
    writeln!(out, "margin = {:.16e}", th.invasion_margin).unwrap();
}

fn emit(report: &str, out: &Option<PathBuf>, file_name: &str) -> Result<()> {
    print!("{report}");
    if let Some(dir) = out {
        write_atomic(&dir.join(file_name), report.as_bytes())?;
    }
    Ok(())
}

fn cmd_reduce(a: &ReduceArgs) -> Result<()> {
    let p = read_params(&a.params)?;
    let rp = reduce(&p)?;
    let th = compute_thresholds(&rp)?;
    let mut report = String::new();
    writeln!(report, "nu_star = {:.16e}", rp.nu_star).unwrap();
    writeln!(report, "r = {:.16e}", rp.r).unwrap();
    writeln!(report, "m = {:.16e}", rp.m).unwrap();
    writeln!(report, "c_SS = {:.16e}", rp.c_ss).unwrap();
    writeln!(report, "a_bar = {:.16e}", rp.a_bar).unwrap();
    writeln!(report, "c_SI = {:.16e}", rp.c_si).unwrap();
    writeln!(report, "c_IS = {:.16e}", rp.c_is).unwrap();
    writeln!(report, "c_II = {:.16e}", rp.c_ii).unwrap();
    writeln!(report, "beta_bar = {:.16e}", rp.beta_bar).unwrap();
    writeln!(report, "gamma_bar = {:.16e}", rp.gamma_bar).unwrap();
    writeln!(report, "mu_bar = {:.16e}", rp.mu_bar).unwrap();
    threshold_lines(&mut report, &th);
    emit(&report, &a.out, "reduced.txt")
}

fn cmd_classify(a: &ClassifyArgs) -> Result<()> {
    let p = read_params(&a.params)?;
    let sc = classify(&p)?;
    let mut report = String::new();
    writeln!(report, "label = {}", sc.label).unwrap();
    writeln!(report, "coinfection_active = {}", sc.coinfection_active).unwrap();
    writeln!(report, "nu_star = {:.16e}", sc.reduced.nu_star).unwrap();
    threshold_lines(&mut report, &sc.thresholds);
    writeln!(report, "equilibrium_count = {}", sc.equilibria.len()).unwrap();
    for (k, e) in sc.equilibria.iter().enumerate() {
        writeln!(report, "eq_{k}_kind = {}", e.kind).unwrap();
        writeln!(report, "eq_{k}_stability = {}", e.stability).unwrap();
        writeln!(report, "eq_{k}_S = {:.16e}", e.location.s).unwrap();
        writeln!(report, "eq_{k}_I = {:.16e}", e.location.i).unwrap();
        for (j, eig) in e.eigenvalues.iter().enumerate() {
            writeln!(report, "eq_{k}_eig{}_re = {:.16e}", j + 1, eig.re).unwrap();
            writeln!(report, "eq_{k}_eig{}_im = {:.16e}", j + 1, eig.im).unwrap();
        }
    }
    emit(&report, &a.out, "scenario.txt")
}

fn simulate_options(a: &SimulateArgs) -> Result<Options> {
    let mut opts = Options::default();
    if let Some(tol) = &a.tol {
        let (rtol, atol) = parse_pair(tol, "--tol")?;
        opts.rtol = rtol;
        opts.atol = atol;
    }
    if a.no_early_stop {
        opts.steady_tol = None;
    }
    Ok(opts)
}

fn simulate_report<const N: usize>(report: &mut String, tr: &Trajectory<N>, names: &[&str; N]) {
    let (t, y) = tr.last();
    let stop = match tr.stop {
        StopReason::Horizon => "horizon".to_string(),
        StopReason::Steady { t } => format!("steady at t = {t:.6e}"),
    };
    writeln!(report, "stop = {stop}").unwrap();
    writeln!(report, "t_final = {t:.16e}").unwrap();
    for (name, v) in names.iter().zip(&y) {
        writeln!(report, "{name} = {v:.16e}").unwrap();
    }
    writeln!(report, "accepted = {}", tr.stats.accepted).unwrap();
    writeln!(report, "rejected = {}", tr.stats.rejected).unwrap();
    writeln!(report, "rhs_evals = {}", tr.stats.rhs_evals).unwrap();
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let p = read_params(&a.params)?;
    let init = parse_f64_list(&a.init, "--init")?;
    let opts = simulate_options(a)?;
    let sampling = Sampling::Uniform(a.samples.max(1));
    let mut report = String::new();
    writeln!(
        report,
        "system = {}",
        match a.system {
            SystemKind::Complete => "complete",
            SystemKind::Reduced => "reduced",
        }
    )
    .unwrap();
    let csv = match a.system {
        SystemKind::Complete => {
            let [s, u, v] = init.as_slice() else {
                return Err(Error::IntegrationSetup(format!(
                    "complete system needs S,U,V as --init, got {} values",
                    init.len()
                )));
            };
            let tr = integrate(
                |_, y: &[f64; 3]| {
                    rhs_complete(
                        &p,
                        State3 {
                            s: y[0],
                            u: y[1],
                            v: y[2],
                        },
                    )
                    .into()
                },
                0.0,
                [*s, *u, *v],
                a.horizon,
                sampling,
                &opts,
            )?;
            simulate_report(&mut report, &tr, &["S", "U", "V"]);
            tr.to_csv(&["S", "U", "V"])
        }
        SystemKind::Reduced => {
            let [s, i] = init.as_slice() else {
                return Err(Error::IntegrationSetup(format!(
                    "reduced system needs S,I as --init, got {} values",
                    init.len()
                )));
            };
            let rp = reduce(&p)?;
            let tr = integrate(
                |_, y: &[f64; 2]| rhs_reduced(&rp, State2 { s: y[0], i: y[1] }).into(),
                0.0,
                [*s, *i],
                a.horizon,
                sampling,
                &opts,
            )?;
            simulate_report(&mut report, &tr, &["S", "I"]);
            tr.to_csv(&["S", "I"])
        }
    };
    if let Some(dir) = &a.out {
        let path = dir.join("trajectory.csv");
        write_atomic(&path, csv.as_bytes())?;
        writeln!(report, "csv = {}", path.display()).unwrap();
    }
    print!("{report}");
    if let Some(dir) = &a.out {
        write_atomic(&dir.join("simulate.txt"), report.as_bytes())?;
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Result<()> {
    let p = read_params(&a.params)?;
    let axes: Vec<&str> = a.axes.split(',').map(str::trim).collect();
    let [x_key, y_key] = axes.as_slice() else {
        return Err(Error::SweepSpec(format!(
            "--axes needs exactly two names, got `{}`",
            a.axes
        )));
    };
    let (res_x, res_y) = parse_pair(&a.res, "--res")?;
    if res_x.fract() != 0.0 || res_y.fract() != 0.0 || res_x < 1.0 || res_y < 1.0 {
        return Err(Error::SweepSpec(format!(
            "--res needs positive integers, got `{}`",
            a.res
        )));
    }
    let spec = SweepSpec {
        x_key: x_key.to_string(),
        y_key: y_key.to_string(),
        x_range: parse_pair(&a.range_x, "--range-x")?,
        y_range: parse_pair(&a.range_y, "--range-y")?,
        nx: res_x as usize,
        ny: res_y as usize,
    };
    // a relative image name lands next to the CSV; reject bad extensions
    // before doing any work so a failed run leaves nothing behind
    let image = a.image.as_ref().map(|img| {
        if img.is_relative() {
            a.out
                .as_deref()
                .map_or_else(|| img.clone(), |d| d.join(img))
        } else {
            img.clone()
        }
    });
    if let Some(img) = &image {
        if !matches!(
            img.extension().and_then(|e| e.to_str()),
            Some("ppm") | Some("svg")
        ) {
            return Err(Error::SweepSpec(format!(
                "unsupported image extension in `{}`; use .ppm or .svg",
                img.display()
            )));
        }
    }
    let grid = run_sweep(&p, &spec)?;
    let mut report = String::new();
    writeln!(report, "cells = {}", grid.cells.len()).unwrap();
    // stable histogram: count in canonical label order
    use crate::equilibria::ScenarioLabel::*;
    for label in [
        Extinction,
        DiseaseFreeGlobal,
        EndemicGlobal,
        EndemicLocal,
        Bistable,
        DegenerateTangent,
        Boundary,
    ] {
        let n = grid.cells.iter().filter(|c| c.label == label).count();
        if n > 0 {
            writeln!(report, "count_{label} = {n}").unwrap();
        }
    }
    if let Some(dir) = &a.out {
        let path = dir.join("grid.csv");
        write_atomic(&path, grid.to_csv().as_bytes())?;
        writeln!(report, "csv = {}", path.display()).unwrap();
    }
    if let Some(image) = &image {
        if let Some(dir) = image.parent() {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)?;
            }
        }
        write_image(&grid, image)?;
        writeln!(report, "image = {}", image.display()).unwrap();
    }
    print!("{report}");
    if let Some(dir) = &a.out {
        write_atomic(&dir.join("sweep.txt"), report.as_bytes())?;
    }
    Ok(())
}

fn cmd_validate(a: &ValidateArgs) -> Result<()> {
    let p = read_params(&a.params)?;
    let epsilons = parse_f64_list(&a.epsilons, "--epsilons")?;
    let check = validate_aggregation(&p, &epsilons, a.horizon, &Options::default())?;
    let mut report = String::new();
    writeln!(report, "target_S = {:.16e}", check.target.s).unwrap();
    writeln!(report, "target_U = {:.16e}", check.target.u).unwrap();
    writeln!(report, "target_V = {:.16e}", check.target.v).unwrap();
    writeln!(report, "inconclusive = {}", check.inconclusive).unwrap();
    let mut csv = String::from("epsilon,distance,relative,steady\n");
    for (k, row) in check.rows.iter().enumerate() {
        writeln!(report, "row_{k}_epsilon = {:.16e}", row.epsilon).unwrap();
        writeln!(report, "row_{k}_distance = {:.16e}", row.distance).unwrap();
        writeln!(report, "row_{k}_relative = {:.16e}", row.relative).unwrap();
        writeln!(report, "row_{k}_steady = {}", row.steady).unwrap();
        writeln!(
            csv,
            "{:.16e},{:.16e},{:.16e},{}",
            row.epsilon, row.distance, row.relative, row.steady
        )
        .unwrap();
    }
    if let Some(dir) = &a.out {
        let path = dir.join("validation.csv");
        write_atomic(&path, csv.as_bytes())?;
        writeln!(report, "csv = {}", path.display()).unwrap();
    }
    print!("{report}");
    if let Some(dir) = &a.out {
        write_atomic(&dir.join("validate.txt"), report.as_bytes())?;
    }
    Ok(())
}
