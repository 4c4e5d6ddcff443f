use num_complex::Complex64;
use serde::Serialize;

use crate::field::{bandlimited_noise, indicator_ball, ComplexField, Grid, Weight};
use crate::transforms::{hilbert, plemelj_boundary, wirtinger, LineFunction, SpectralPlan};
use crate::Result;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub schema: String,
    pub grid_n: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &str, value: f64, threshold: f64) -> Check {
    Check { name: name.into(), value, threshold, passed: value <= threshold }
}

fn rel(a: &ComplexField, b: &ComplexField) -> f64 {
    a.sub(b).norm(Weight::Unweighted) / b.norm(Weight::Unweighted)
}

/// Relative L2 error of `S chi_B(0,1)` against `-1/z^2` on `2 <= |z| <= 4`.
pub fn beurling_ball_error(n: usize) -> Result<f64> {
    let grid = Grid::new(8.0, n)?;
    let plan = SpectralPlan::new(grid, 2)?;
    let s = plan.beurling(&indicator_ball(&grid, Complex64::new(0.0, 0.0), 1.0, 0.0)?)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, z) in grid.points() {
        let r = z.norm();
        if (2.0..=4.0).contains(&r) {
            let exact = -(z * z).inv();
            num += (s.values()[i] - exact).norm_sqr();
            den += exact.norm_sqr();
        }
    }
    Ok((num / den).sqrt())
}

/// Quick numerical checks of the transform layer.
pub fn transform_selftest(n: usize) -> Result<SelftestReport> {
    let mut checks = Vec::new();
    // first-order in h: scale the 2% budget at n = 1024
    let ball = beurling_ball_error(n)?;
    checks.push(check("beurling_ball_relative_error", ball, 0.02 * (1024.0 / n as f64).max(1.0)));

    let grid = Grid::new(8.0, n.min(256))?;
    let plan = SpectralPlan::new(grid, 2)?;
    let f = bandlimited_noise(&grid, 0, 0.4)?;
    let ratio = plan.beurling_extended(&f)?.norm(Weight::Unweighted) / f.norm(Weight::Unweighted);
    checks.push(check("beurling_isometry_defect", (ratio - 1.0).abs(), 1e-12));

    let g = bandlimited_noise(&grid, 1, 0.4)?;
    let lhs = plan.beurling(&f)?.inner(&g, Weight::Unweighted);
    let rhs = f.inner(&plan.beurling_adjoint(&g)?, Weight::Unweighted);
    checks.push(check("adjoint_identity", (lhs - rhs).norm() / lhs.norm(), 1e-10));

    let periodic = SpectralPlan::periodic(grid);
    let f = bandlimited_noise(&grid, 2, 0.1)?;
    let t = periodic.cauchy_plane(&f)?;
    let (d, dbar) = wirtinger(&t);
    checks.push(check("cauchy_dbar_contract", rel(&dbar, &f), 1e-4));
    checks.push(check("cauchy_d_contract", rel(&d, &periodic.beurling(&f)?), 1e-4));

    let line = LineFunction::compact_real(200.0, 8192, |x| 1.0 / (1.0 + x * x))?;
    let (plus, minus) = plemelj_boundary(&line);
    let jump = plus.sub(&minus).sub(&line).values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    checks.push(check("plemelj_jump", jump, 1e-12));
    let h = hilbert(&line);
    let (mut num, mut den) = (0.0, 0.0);
    for (i, x) in line.xs().into_iter().enumerate() {
        let exact = x / (1.0 + x * x);
        num += (h.values()[i].re - exact).powi(2);
        den += exact * exact;
    }
    checks.push(check("hilbert_lorentzian_relative_error", (num / den).sqrt(), 1e-3));

    let passed = checks.iter().all(|c| c.passed);
    Ok(SelftestReport { schema: "qcircle.selftest.v1".into(), grid_n: n, checks, passed })
}
