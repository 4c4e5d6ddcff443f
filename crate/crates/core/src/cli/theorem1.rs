use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::run::write_json;
use crate::analysis::{carleson_density, carleson_norm, CarlesonGeometry};
use crate::beltrami::{weighted_operator_norm, BeltramiCoefficient};
use crate::field::Grid;
use crate::transforms::SpectralPlan;
use crate::{Error, Result};

/// Family `mu = c chi_B(x0 + 2ri, r)` over `radii x amplitudes`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Theorem1Config {
    pub grid_n: usize,
    pub grid_l: f64,
    pub padding_factor: usize,
    pub x0: f64,
    pub radii: Vec<f64>,
    pub amplitudes: Vec<f64>,
    /// Mollification width as a fraction of the radius.
    pub mollify_fraction: f64,
    pub tol: f64,
    pub max_iter: usize,
    /// Scalings `t` applied to the sweep member.
    pub sweep: Vec<f64>,
    /// Index of the swept member in radius-major family order.
    pub sweep_member: usize,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Theorem1Config {
            grid_n: 512,
            grid_l: 16.0,
            padding_factor: 2,
            x0: 0.0,
            radii: vec![0.5, 1.0, 2.0, 4.0],
            amplitudes: vec![0.2, 0.5, 0.8],
            mollify_fraction: 0.25,
            tol: 1e-7,
            max_iter: 1000,
            sweep: vec![0.2, 0.4, 0.8],
            sweep_member: 3,
            out: PathBuf::from("qcircle-out"),
        }
    }
}

impl Theorem1Config {
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Row {
    pub radius: f64,
    pub amplitude: f64,
    pub carleson_norm: f64,
    pub operator_norm: f64,
    pub operator_norm_sq: f64,
    pub ratio: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub t: f64,
    pub operator_norm: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Table {
    pub schema: String,
    pub config_hash: String,
    pub config: Theorem1Config,
    pub rows: Vec<Theorem1Row>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Smallest `C` with every ratio in `[1/C, C]`.
    pub bracket_constant: f64,
    pub sweep: Vec<SweepRow>,
    /// Log-log slope of `operator_norm^2` against `t`.
    pub sweep_slope: f64,
    pub converged: bool,
}

impl Theorem1Table {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("radius,amplitude,carleson_norm,operator_norm,operator_norm_sq,ratio\n");
        for r in &self.rows {
            writeln!(
                s,
                "{},{},{},{},{},{}",
                r.radius, r.amplitude, r.carleson_norm, r.operator_norm, r.operator_norm_sq, r.ratio
            )
            .unwrap();
        }
        s
    }
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// One row per family member plus a `t mu` sweep on one member.
/// Writes `theorem1.csv` and `theorem1.json` into `config.out`.
pub fn compare_theorem1(config: &Theorem1Config) -> Result<Theorem1Table> {
    if config.radii.len() * config.amplitudes.len() < 3 {
        return Err(Error::Config("the family needs at least 3 members".into()));
    }
    if config.sweep.len() < 2 || config.sweep.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
        return Err(Error::Config("sweep needs at least two values t in (0, 1]".into()));
    }
    if config.amplitudes.iter().any(|c| !(*c > 0.0 && *c < 1.0)) {
        return Err(Error::Config("amplitudes must lie in (0, 1)".into()));
    }
    let grid = Grid::new(config.grid_l, config.grid_n).map_err(|e| Error::Config(e.to_string()))?;
    let mut members = Vec::new();
    for &r in &config.radii {
        let center = Complex64::new(config.x0, 2.0 * r);
        if !(r > 0.0) || !grid.contains_ball(center, r) {
            return Err(Error::Config(format!("ball of radius {r} at {center} leaves the grid box")));
        }
        for &c in &config.amplitudes {
            members.push((r, c, center));
        }
    }
    if config.sweep_member >= members.len() {
        return Err(Error::Config(format!("sweep member {} is outside the family", config.sweep_member)));
    }
    let plan = SpectralPlan::new(grid, config.padding_factor)?;
    let mut rows = Vec::new();
    let mut converged = true;
    let mut swept = None;
    for (idx, &(r, c, center)) in members.iter().enumerate() {
        let mu = BeltramiCoefficient::ball(&grid, Complex64::new(c, 0.0), center, r, config.mollify_fraction * r)?;
        let carleson = carleson_norm(&carleson_density(&mu), CarlesonGeometry::Line)?.norm;
        let stats = weighted_operator_norm(&plan, &mu, config.tol, config.max_iter)?;
        converged &= stats.converged;
        let norm = stats.weighted_norm_estimate.unwrap_or(0.0);
        rows.push(Theorem1Row {
            radius: r,
            amplitude: c,
            carleson_norm: carleson,
            operator_norm: norm,
            operator_norm_sq: norm * norm,
            ratio: norm * norm / carleson,
            iterations: stats.iteration_count,
        });
        if idx == config.sweep_member {
            swept = Some(mu);
        }
    }
    let base = swept.expect("sweep member checked above");
    let mut sweep = Vec::new();
    for &t in &config.sweep {
        let stats = weighted_operator_norm(&plan, &base.scale(Complex64::new(t, 0.0))?, config.tol, config.max_iter)?;
        converged &= stats.converged;
        sweep.push(SweepRow { t, operator_norm: stats.weighted_norm_estimate.unwrap_or(0.0) });
    }
    let logs_t: Vec<f64> = sweep.iter().map(|s| s.t.ln()).collect();
    let logs_n: Vec<f64> = sweep.iter().map(|s| (s.operator_norm * s.operator_norm).ln()).collect();
    let ratio_min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let ratio_max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let table = Theorem1Table {
        schema: "qcircle.theorem1.v1".into(),
        config_hash: config.hash(),
        config: config.clone(),
        bracket_constant: ratio_max.max(1.0 / ratio_min),
        ratio_min,
        ratio_max,
        rows,
        sweep_slope: slope(&logs_t, &logs_n),
        sweep,
        converged,
    };
    fs::create_dir_all(&config.out)?;
    fs::write(config.out.join("theorem1.csv"), table.to_csv())?;
    write_json(&config.out.join("theorem1.json"), &table)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_family_and_sweep() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = Theorem1Config {
            grid_n: 64,
            grid_l: 8.0,
            radii: vec![0.5, 1.0],
            amplitudes: vec![0.2, 0.5],
            out: dir.path().to_path_buf(),
            ..Default::default()
        };
        let t = compare_theorem1(&cfg).unwrap();
        assert_eq!(t.rows.len(), 4);
        assert!((t.sweep_slope - 2.0).abs() < 0.01);
        assert!(t.bracket_constant.is_finite());
        let csv = fs::read_to_string(dir.path().join("theorem1.csv")).unwrap();
        assert_eq!(csv.lines().count(), 5);
    }

    #[test]
    fn empty_family_is_a_usage_error() {
        let cfg = Theorem1Config { radii: vec![], ..Default::default() };
        assert!(matches!(compare_theorem1(&cfg), Err(Error::Config(_))));
    }
}
