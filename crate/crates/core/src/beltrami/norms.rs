use num_complex::Complex64;
use serde::Serialize;

use super::{neumann_solve, BeltramiCoefficient};
use crate::field::{bandlimited_noise, indicator_ball, ComplexField, Grid, Weight};
use crate::transforms::SpectralPlan;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct OperatorStats {
    /// `||mu S||` on `L^2(dm/|y|)`, when a power iteration was run.
    pub weighted_norm_estimate: Option<f64>,
    pub iteration_count: usize,
    pub relative_change_at_stop: f64,
    pub converged: bool,
    pub rayleigh_history: Vec<f64>,
    /// Largest `||h||_w^2 / ||Phi||_w^2` over the probes, when probes were run.
    pub probe_c1_estimate: Option<f64>,
    pub probe_ratios: Vec<f64>,
}

fn inv_abs_y(z: Complex64) -> f64 {
    Weight::InvAbsY.at(z)
}

/// Power iteration on `A* A` for `A = mu S`, where the adjoint is taken in
/// the `1/|y|` inner product: `A* g = |y| S*(conj(mu) g / |y|)`.
pub fn weighted_operator_norm(
    plan: &SpectralPlan,
    mu: &BeltramiCoefficient,
    tol: f64,
    max_iter: usize,
) -> Result<OperatorStats> {
    if mu.grid() != plan.grid() {
        return Err(Error::SupportViolation);
    }
    let empty = OperatorStats {
        weighted_norm_estimate: Some(0.0),
        iteration_count: 0,
        relative_change_at_stop: 0.0,
        converged: true,
        rayleigh_history: Vec::new(),
        probe_c1_estimate: None,
        probe_ratios: Vec::new(),
    };
    if mu.is_zero() {
        return Ok(empty);
    }
    let m = mu.field();
    let forward = |x: &ComplexField| -> Result<ComplexField> { Ok(m.mul(&plan.beurling(x)?)) };
    let adjoint = |g: &ComplexField| -> Result<ComplexField> {
        let t = m.zip_with(g, |a, b| a.conj() * b).map(|z, v| v * inv_abs_y(z));
        Ok(plan.beurling_adjoint(&t)?.map(|z, v| v / inv_abs_y(z)))
    };
    let normalize = |x: ComplexField| {
        let s = x.norm(Weight::InvAbsY);
        x.scale(Complex64::new(1.0 / s, 0.0))
    };
    let mut x = normalize(adjoint(m)?);
    let mut history: Vec<f64> = Vec::new();
    let mut change = f64::INFINITY;
    for it in 1..=max_iter {
        let ax = forward(&x)?;
        let q = ax.norm_sqr(Weight::InvAbsY);
        if let Some(&prev) = history.last() {
            change = (q - prev).abs() / q;
        }
        history.push(q);
        if change <= tol {
            return Ok(OperatorStats {
                weighted_norm_estimate: Some(q.sqrt()),
                iteration_count: it,
                relative_change_at_stop: change,
                rayleigh_history: history,
                ..empty
            });
        }
        x = normalize(adjoint(&ax)?);
    }
    Ok(OperatorStats {
        weighted_norm_estimate: history.last().map(|q| q.sqrt()),
        iteration_count: max_iter,
        relative_change_at_stop: change,
        converged: false,
        rayleigh_history: history,
        ..empty
    })
}

/// Eight band-limited noise fields and four mollified discs at increasing
/// heights above the axis.
pub fn default_probes(grid: &Grid, seed: u64) -> Result<Vec<ComplexField>> {
    let mut probes = Vec::with_capacity(12);
    for s in 0..8 {
        probes.push(bandlimited_noise(grid, seed + s, 0.25)?);
    }
    let unit = grid.half_width() / 8.0;
    for height in [0.6, 1.2, 2.4, 4.8] {
        probes.push(indicator_ball(grid, Complex64::new(0.0, height * unit), 0.5 * unit, 0.25 * unit)?);
    }
    Ok(probes)
}

/// Empirical `c_1`: the largest `||(I - mu S)^{-1} Phi||_w^2 / ||Phi||_w^2`
/// over the probes. A lower estimate of the true constant.
pub fn inverse_weighted_bound(
    plan: &SpectralPlan,
    mu: &BeltramiCoefficient,
    probes: &[ComplexField],
    tol: f64,
    max_iter: usize,
) -> Result<OperatorStats> {
    let mut ratios = Vec::with_capacity(probes.len());
    let mut iterations = 0;
    for phi in probes {
        let base = phi.norm_sqr(Weight::InvAbsY);
        if base == 0.0 {
            return Err(Error::OutOfRange("probe fields must be nonzero".into()));
        }
        let report = neumann_solve(plan, mu, phi, tol, max_iter)?.require_converged()?;
        iterations += report.iterations;
        ratios.push(report.solution.norm_sqr(Weight::InvAbsY) / base);
    }
    let c1 = ratios.iter().copied().fold(f64::NAN, f64::max);
    Ok(OperatorStats {
        weighted_norm_estimate: None,
        iteration_count: iterations,
        relative_change_at_stop: 0.0,
        converged: true,
        rayleigh_history: Vec::new(),
        probe_c1_estimate: (!ratios.is_empty()).then_some(c1),
        probe_ratios: ratios,
    })
}
