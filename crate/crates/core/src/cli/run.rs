use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

use super::{ScenarioConfig, ScenarioKind};
use crate::analysis::{carleson_density, carleson_norm, rectifiability_energy, CarlesonGeometry, CarlesonReport};
use crate::beltrami::{
    default_probes, inverse_weighted_bound, neumann_solve, weighted_operator_norm, BeltramiCoefficient, OperatorStats,
    SolveReport, SolvedMap,
};
use crate::field::{read_binary, ComplexField, Grid};
use crate::geometry::{
    ba_extension, bilipschitz_profile, chord_arc_constant, curve_cauchy_operator, prop2_map, regularity_check,
    trace_curve, wirtinger_fd, BilipschitzProfile, ChordArcReport, CurveCauchyReport, CurveTrace, MapEvaluator,
    Provenance,
};
use crate::transforms::{LineFunction, SpectralPlan};
use crate::{Error, Result};

const CAUCHY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct GridInfo {
    pub half_width: f64,
    pub n: usize,
    pub spacing: f64,
}

impl From<&Grid> for GridInfo {
    fn from(g: &Grid) -> Self {
        GridInfo { half_width: g.half_width(), n: g.n(), spacing: g.spacing() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub grid_half_width: f64,
    pub trace_window: f64,
    pub mu_support_radius: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MuSummary {
    pub sup_bound: f64,
    pub support_radius: f64,
    pub nonzero_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct MapInfo {
    pub provenance: Provenance,
    pub notes: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceSummary {
    pub file: String,
    pub samples: usize,
    pub window: f64,
    pub total_length: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub schema: String,
    pub config_hash: String,
    pub config: ScenarioConfig,
    pub grid: GridInfo,
    pub seed: u64,
    pub truncation: Truncation,
    pub mu: MuSummary,
    pub map: MapInfo,
    pub solve: Option<SolveReport>,
    pub carleson: CarlesonReport,
    pub operator_norm: OperatorStats,
    pub c1: Option<OperatorStats>,
    pub trace: TraceSummary,
    pub chord_arc: ChordArcReport,
    pub regularity: f64,
    pub rectifiability_energy: f64,
    pub curve_cauchy: CurveCauchyReport,
    pub converged: bool,
}

#[derive(Debug)]
pub struct RunOutcome {
    pub report: ScenarioReport,
    pub files: Vec<PathBuf>,
    pub converged: bool,
}

/// `mu`, the map, `dbar rho` on the grid, and the solve when there is one.
struct Built {
    mu: BeltramiCoefficient,
    map: Box<dyn MapEvaluator>,
    dbar: ComplexField,
    solve: Option<SolveReport>,
}

fn fd_dbar(map: &dyn MapEvaluator, grid: &Grid) -> Result<ComplexField> {
    let h = grid.spacing();
    let mut values = Vec::with_capacity(grid.len());
    for (_, z) in grid.points() {
        values.push(wirtinger_fd(map, z, (0.25 * z.im.abs()).min(0.25 * h))?.1);
    }
    ComplexField::from_values(*grid, values)
}

fn power_boundary(k: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| x.signum() * x.abs().powf(1.0 / k)
}

fn build(config: &ScenarioConfig, grid: &Grid, plan: &SpectralPlan) -> Result<Built> {
    match config.scenario {
        ScenarioKind::Ball | ScenarioKind::CustomFile => {
            let mu = if config.scenario == ScenarioKind::Ball {
                if config.c == 0.0 {
                    BeltramiCoefficient::zero(*grid)
                } else {
                    BeltramiCoefficient::ball(
                        grid,
                        Complex64::new(config.c, 0.0),
                        config.center,
                        config.radius,
                        config.mollify_width,
                    )?
                }
            } else {
                let path = config.mu_file.as_ref().expect("validated");
                let field = read_binary(fs::File::open(path)?)?;
                if field.grid() != grid {
                    return Err(Error::Config(format!(
                        "mu file grid (L = {}, n = {}) differs from the configured grid",
                        field.grid().half_width(),
                        field.grid().n()
                    )));
                }
                BeltramiCoefficient::new(field)?
            };
            let report = neumann_solve(plan, &mu, mu.field(), config.tol, config.max_iter)?;
            let map = SolvedMap::from_report(report.clone());
            Ok(Built { dbar: report.solution.clone(), mu, map: Box::new(map), solve: Some(report) })
        }
        ScenarioKind::Prop2 => {
            let (map, mu) = prop2_map(config.k, grid)?;
            let dbar = fd_dbar(&map, grid)?;
            Ok(Built { mu, map: Box::new(map), dbar, solve: None })
        }
        ScenarioKind::BaExtension => {
            let f = power_boundary(config.k);
            let window = 2.0 * grid.half_width().max(config.trace_window);
            let samples = (8 * grid.n()).max(4 * config.trace_samples);
            let line = LineFunction::from_fn(window, samples, |x| Complex64::new(f(x), 0.0))?;
            let map = ba_extension(&line)?;
            let mu = BeltramiCoefficient::new(map.beltrami_field(grid)?)?;
            let dbar = fd_dbar(&map, grid)?;
            Ok(Built { mu, map: Box::new(map), dbar, solve: None })
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Runs every analyzer on the scenario and writes `report.json` and
/// `trace.csv` into `config.out`. Nothing is written when validation fails.
pub fn run_scenario(config: &ScenarioConfig) -> Result<RunOutcome> {
    config.validate()?;
    let grid = config.grid()?;
    let plan = SpectralPlan::new(grid, config.padding_factor)?;
    let built = build(config, &grid, &plan)?;
    let mut converged = built.solve.as_ref().map_or(true, |s| s.converged);

    let carleson = carleson_norm(&carleson_density(&built.mu), CarlesonGeometry::Line)?;
    let operator_norm = weighted_operator_norm(&plan, &built.mu, 1e-8, config.max_iter.max(200))?;
    converged &= operator_norm.converged;
    let probes = default_probes(&grid, config.seed)?;
    let c1 = match inverse_weighted_bound(&plan, &built.mu, &probes, config.tol, config.max_iter) {
        Ok(stats) => Some(stats),
        Err(Error::NotConverged { .. }) => {
            converged = false;
            None
        }
        Err(e) => return Err(e),
    };
    let trace = trace_curve(built.map.as_ref(), config.trace_window, config.trace_samples)?;
    let chord_arc = chord_arc_constant(&trace)?;
    let regularity = regularity_check(&trace)?;
    let curve_cauchy = curve_cauchy_operator(&trace, CAUCHY_TOL, 2000)?;
    converged &= curve_cauchy.converged;

    let report = ScenarioReport {
        schema: "qcircle.run.v1".into(),
        config_hash: config.hash(),
        config: config.clone(),
        grid: GridInfo::from(&grid),
        seed: config.seed,
        truncation: Truncation {
            grid_half_width: grid.half_width(),
            trace_window: config.trace_window,
            mu_support_radius: built.mu.support_radius(),
        },
        mu: MuSummary {
            sup_bound: built.mu.sup_bound(),
            support_radius: built.mu.support_radius(),
            nonzero_samples: built.mu.field().nonzero_samples().len(),
        },
        map: MapInfo { provenance: built.map.provenance(), notes: built.map.notes() },
        solve: built.solve,
        carleson,
        operator_norm,
        c1,
        trace: TraceSummary {
            file: "trace.csv".into(),
            samples: trace.len(),
            window: trace.half_window(),
            total_length: trace.total_length(),
        },
        chord_arc,
        regularity,
        rectifiability_energy: rectifiability_energy(&built.dbar),
        curve_cauchy,
        converged,
    };

    fs::create_dir_all(&config.out)?;
    let report_path = config.out.join("report.json");
    let trace_path = config.out.join("trace.csv");
    write_json(&report_path, &report)?;
    trace.write_csv(fs::File::create(&trace_path)?)?;
    Ok(RunOutcome { report, files: vec![report_path, trace_path], converged })
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Summary {
    pub schema: String,
    pub config_hash: String,
    pub config: ScenarioConfig,
    pub carleson_norm: f64,
    pub c1: f64,
    pub chord_arc: f64,
    pub rectifiability_energy: f64,
    pub trace_length: f64,
    pub trace_length_reference: f64,
    /// Relative change of the trace length under refinement: the grid is
    /// halved for solved maps, the trace sampling for closed forms.
    pub trace_length_delta: f64,
    pub bilipschitz: BilipschitzProfile,
    pub non_bilipschitz: bool,
    pub converged: bool,
}

fn straddling_pairs() -> Vec<(Complex64, Complex64)> {
    (1..=14)
        .flat_map(|k| {
            let x = 0.5f64.powi(k);
            [(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)), (Complex64::new(-x, 0.0), Complex64::new(0.0, 0.0))]
        })
        .collect()
}

/// Carleson norm, empirical `c_1` and chord-arc constant, plus the
/// rectifiability pair (energy, trace-length refinement). Writes
/// `theorem2.json` into `config.out`.
pub fn verify_theorem2(config: &ScenarioConfig) -> Result<Theorem2Summary> {
    config.validate()?;
    let grid = config.grid()?;
    let plan = SpectralPlan::new(grid, config.padding_factor)?;
    let built = build(config, &grid, &plan)?;
    if let Some(s) = &built.solve {
        if !s.converged {
            return Err(Error::NotConverged { iterations: s.iterations, residual: s.last_residual() });
        }
    }
    let carleson = carleson_norm(&carleson_density(&built.mu), CarlesonGeometry::Line)?;
    let probes = default_probes(&grid, config.seed)?;
    let c1 = inverse_weighted_bound(&plan, &built.mu, &probes, config.tol, config.max_iter)?
        .probe_c1_estimate
        .unwrap_or(1.0);
    let trace = trace_curve(built.map.as_ref(), config.trace_window, config.trace_samples)?;
    let chord_arc = chord_arc_constant(&trace)?.constant;
    let reference = reference_trace(config, &grid, built.map.as_ref())?;
    let (len, ref_len) = (trace.total_length(), reference.total_length());
    let bilipschitz = bilipschitz_profile(built.map.as_ref(), &straddling_pairs(), Complex64::new(0.0, 0.0))?;
    let summary = Theorem2Summary {
        schema: "qcircle.theorem2.v1".into(),
        config_hash: config.hash(),
        config: config.clone(),
        carleson_norm: carleson.norm,
        c1,
        chord_arc,
        rectifiability_energy: rectifiability_energy(&built.dbar),
        trace_length: len,
        trace_length_reference: ref_len,
        trace_length_delta: (len - ref_len).abs() / len,
        non_bilipschitz: bilipschitz.blowup_exponent.is_some(),
        bilipschitz,
        converged: true,
    };
    fs::create_dir_all(&config.out)?;
    write_json(&config.out.join("theorem2.json"), &summary)?;
    Ok(summary)
}

fn reference_trace(config: &ScenarioConfig, grid: &Grid, map: &dyn MapEvaluator) -> Result<CurveTrace> {
    match config.scenario {
        ScenarioKind::Ball if config.c > 0.0 && grid.n() >= 32 => {
            let coarse = Grid::new(grid.half_width(), grid.n() / 2)?;
            let plan = SpectralPlan::new(coarse, config.padding_factor)?;
            let coarse_config = ScenarioConfig { grid_n: coarse.n(), ..config.clone() };
            let built = build(&coarse_config, &coarse, &plan)?;
            trace_curve(built.map.as_ref(), config.trace_window, config.trace_samples)
        }
        _ => trace_curve(map, config.trace_window, config.trace_samples / 2),
    }
}
