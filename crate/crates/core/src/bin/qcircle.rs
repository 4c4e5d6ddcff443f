use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use quasicircle::cli::{
    compare_theorem1, error_json, exit_code, run_scenario, transform_selftest, verify_theorem2, write_json,
    ScenarioConfig, ScenarioKind, Theorem1Config,
};
use quasicircle::{Error, Result};

#[derive(Parser)]
#[command(name = "qcircle", version, about = "Beltrami solver and quasicircle diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write report.json and trace.csv.
    Run(ScenarioArgs),
    /// Ball family table: Carleson norm against weighted operator norm.
    Theorem1(Theorem1Args),
    /// Carleson norm, c1, chord-arc constant and length refinement summary.
    Theorem2(ScenarioArgs),
    /// Numerical checks of the transforms.
    TransformSelftest(SelftestArgs),
}

#[derive(Args)]
struct Common {
    /// Cells per side, a power of two.
    #[arg(long)]
    grid_n: Option<usize>,
    /// Half width of the square box.
    #[arg(long)]
    grid_l: Option<f64>,
    /// Solver and power-iteration tolerance.
    #[arg(long)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, env = "QCIRCLE_OUT", default_value = "qcircle-out")]
    out: PathBuf,
}

#[derive(Args)]
struct ScenarioArgs {
    #[command(flatten)]
    common: Common,
    /// ball | prop2 | ba-extension | custom-file
    #[arg(long, default_value = "ball")]
    scenario: String,
    /// K in (1, 2) for prop2 and ba-extension.
    #[arg(long)]
    k: Option<f64>,
    /// Ball amplitude.
    #[arg(long)]
    c: Option<f64>,
    /// Ball center as "x,y".
    #[arg(long)]
    center: Option<String>,
    #[arg(long)]
    radius: Option<f64>,
    /// Width of the smooth ramp inside the ball rim.
    #[arg(long)]
    mollify_width: Option<f64>,
    /// Coefficient written by `write_binary`, for custom-file.
    #[arg(long)]
    mu_file: Option<PathBuf>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Seed for the random probes.
    #[arg(long)]
    seed: Option<u64>,
    /// Half width of the real interval whose image is traced.
    #[arg(long)]
    trace_window: Option<f64>,
    #[arg(long)]
    trace_samples: Option<usize>,
}

#[derive(Args)]
struct Theorem1Args {
    #[command(flatten)]
    common: Common,
    /// Comma-separated radii.
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Comma-separated amplitudes.
    #[arg(long, value_delimiter = ',')]
    amplitudes: Option<Vec<f64>>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 256)]
    grid_n: usize,
    #[arg(long, env = "QCIRCLE_OUT", default_value = "qcircle-out")]
    out: PathBuf,
}

fn parse_center(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let bad = || Error::Config(format!("center must be \"x,y\", got '{s}'"));
    match parts.as_slice() {
        [x, y] => Ok(Complex64::new(x.parse().map_err(|_| bad())?, y.parse().map_err(|_| bad())?)),
        _ => Err(bad()),
    }
}

fn scenario_config(a: ScenarioArgs) -> Result<ScenarioConfig> {
    let mut cfg = ScenarioConfig { scenario: a.scenario.parse::<ScenarioKind>()?, out: a.common.out, ..Default::default() };
    if let Some(v) = a.common.grid_n {
        cfg.grid_n = v;
    }
    if let Some(v) = a.common.grid_l {
        cfg.grid_l = v;
    }
    if let Some(v) = a.common.tol {
        cfg.tol = v;
    }
    if let Some(v) = a.k {
        cfg.k = v;
    }
    if let Some(v) = a.c {
        cfg.c = v;
    }
    if let Some(v) = a.center {
        cfg.center = parse_center(&v)?;
    }
    if let Some(v) = a.radius {
        cfg.radius = v;
    }
    if let Some(v) = a.mollify_width {
        cfg.mollify_width = v;
    }
    cfg.mu_file = a.mu_file;
    if let Some(v) = a.max_iter {
        cfg.max_iter = v;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.trace_window {
        cfg.trace_window = v;
    }
    if let Some(v) = a.trace_samples {
        cfg.trace_samples = v;
    }
    Ok(cfg)
}

fn not_converged() -> Error {
    Error::NotConverged { iterations: 0, residual: f64::NAN }
}

/// `Ok(false)` means every step ran but a self-test check failed.
fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run(a) => {
            let out = run_scenario(&scenario_config(a)?)?;
            for f in &out.files {
                println!("{}", f.display());
            }
            if !out.converged {
                return Err(not_converged());
            }
        }
        Command::Theorem2(a) => {
            let cfg = scenario_config(a)?;
            let summary = verify_theorem2(&cfg)?;
            println!("{}", cfg.out.join("theorem2.json").display());
            if !summary.converged {
                return Err(not_converged());
            }
        }
        Command::Theorem1(a) => {
            let mut cfg = Theorem1Config { out: a.common.out, ..Default::default() };
            if let Some(v) = a.common.grid_n {
                cfg.grid_n = v;
            }
            if let Some(v) = a.common.grid_l {
                cfg.grid_l = v;
            }
            if let Some(v) = a.common.tol {
                cfg.tol = v;
            }
            if let Some(v) = a.radii {
                cfg.radii = v;
            }
            if let Some(v) = a.amplitudes {
                cfg.amplitudes = v;
            }
            let table = compare_theorem1(&cfg)?;
            println!("{}", cfg.out.join("theorem1.csv").display());
            if !table.converged {
                return Err(not_converged());
            }
        }
        Command::TransformSelftest(a) => {
            let report = transform_selftest(a.grid_n)?;
            std::fs::create_dir_all(&a.out)?;
            write_json(&a.out.join("selftest.json"), &report)?;
            for c in &report.checks {
                println!("{} {} {:.3e} <= {:.1e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
            }
            return Ok(report.passed);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("{}", error_json(&e));
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
