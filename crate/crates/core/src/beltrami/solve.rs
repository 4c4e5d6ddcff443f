use num_complex::Complex64;
use serde::Serialize;

use super::BeltramiCoefficient;
use crate::field::{ComplexField, Weight};
use crate::geometry::{MapEvaluator, Provenance};
use crate::transforms::{cauchy_line_derivative, cauchy_sum, LineFunction, SpectralPlan};
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: ComplexField,
    /// `||(I - mu S) h_k - Phi||_2` for each iterate.
    pub residual_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl SolveReport {
    pub fn last_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(0.0)
    }

    /// Successive residual ratios.
    pub fn contraction_ratios(&self) -> Vec<f64> {
        self.residual_history.windows(2).map(|w| w[1] / w[0]).collect()
    }

    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged { iterations: self.iterations, residual: self.last_residual() })
        }
    }
}

fn check_grids(plan: &SpectralPlan, mu: &BeltramiCoefficient, phi: &ComplexField) -> Result<()> {
    if mu.grid() != plan.grid() || phi.grid() != plan.grid() {
        return Err(Error::SupportViolation);
    }
    Ok(())
}

/// Iterates `h <- Phi + mu S h` from `h = Phi` until the residual, which
/// equals the size of the update, drops to `tol`.
///
/// Running out of iterations is not an error here; the report comes back
/// with `converged == false`.
pub fn neumann_solve(
    plan: &SpectralPlan,
    mu: &BeltramiCoefficient,
    phi: &ComplexField,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    check_grids(plan, mu, phi)?;
    if !(tol > 0.0) {
        return Err(Error::OutOfRange(format!("tolerance must be positive, got {tol}")));
    }
    if mu.is_zero() {
        return Ok(SolveReport { solution: phi.clone(), residual_history: vec![0.0], iterations: 1, converged: true });
    }
    let mut h = phi.clone();
    let mut history = Vec::new();
    for it in 1..=max_iter {
        let next = phi.add(&mu.field().mul(&plan.beurling(&h)?));
        let r = next.sub(&h).norm(Weight::Unweighted);
        history.push(r);
        h = next;
        if r <= tol {
            return Ok(SolveReport { solution: h, residual_history: history, iterations: it, converged: true });
        }
    }
    Ok(SolveReport { solution: h, residual_history: history, iterations: max_iter, converged: false })
}

/// `rho(z) = z + T h(z)` with `h = dbar rho`, evaluated by direct quadrature.
#[derive(Debug, Clone)]
pub struct SolvedMap {
    report: SolveReport,
    samples: Vec<(Complex64, Complex64)>,
    cell_area: f64,
}

impl SolvedMap {
    /// Wraps a (possibly unconverged) solve of `(I - mu S) h = mu`.
    pub fn from_report(report: SolveReport) -> Self {
        let samples = report.solution.nonzero_samples();
        let cell_area = report.solution.grid().cell_area();
        SolvedMap { report, samples, cell_area }
    }

    pub fn dbar(&self) -> &ComplexField {
        &self.report.solution
    }

    pub fn report(&self) -> &SolveReport {
        &self.report
    }
}

impl MapEvaluator for SolvedMap {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval_many(&[z])?[0])
    }

    fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        let t = cauchy_sum(&self.samples, self.cell_area, zs);
        zs.iter().zip(t).map(|(&z, w)| crate::geometry::evaluator::finite(z, z + w)).collect()
    }

    fn provenance(&self) -> Provenance {
        Provenance::Solver
    }

    fn notes(&self) -> String {
        format!("normalized rho(z) = z + O(1/z); dbar supported within |z| <= {:.6}", self.support_radius())
    }
}

impl SolvedMap {
    fn support_radius(&self) -> f64 {
        self.samples.iter().map(|(z, _)| z.norm()).fold(0.0, f64::max)
    }
}

/// Solves `(I - mu S) h = mu` and wraps `z + T h`.
pub fn solve_beltrami(plan: &SpectralPlan, mu: &BeltramiCoefficient, tol: f64, max_iter: usize) -> Result<SolvedMap> {
    let report = neumann_solve(plan, mu, mu.field(), tol, max_iter)?.require_converged()?;
    Ok(SolvedMap::from_report(report))
}

#[derive(Debug, Clone)]
pub struct InhomogeneousSolution {
    /// `dbar H`, solving `(I - mu S) dbar H = mu C'_f`.
    pub dbar: ComplexField,
    /// `H = T(dbar H)` on the grid.
    pub field: ComplexField,
    /// `H` on the line samples of `f`, averaged over the two grid rows
    /// adjacent to the axis.
    pub boundary: LineFunction,
    pub report: SolveReport,
}

/// Solves `dbar H - mu d H = mu C'_f` for `H = T(dbar H)`.
pub fn solve_inhomogeneous(
    plan: &SpectralPlan,
    mu: &BeltramiCoefficient,
    f: &LineFunction,
    tol: f64,
    max_iter: usize,
) -> Result<InhomogeneousSolution> {
    let grid = *plan.grid();
    let support: Vec<(usize, Complex64)> = grid.points().filter(|&(i, _)| mu.field().values()[i] != Complex64::new(0.0, 0.0)).collect();
    let pts: Vec<Complex64> = support.iter().map(|&(_, z)| z).collect();
    let derivative = cauchy_line_derivative(f, &pts)?;
    let mut rhs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (&(i, _), d) in support.iter().zip(derivative) {
        rhs[i] = mu.field().values()[i] * d;
    }
    let rhs = ComplexField::from_values(grid, rhs)?;
    let report = neumann_solve(plan, mu, &rhs, tol, max_iter)?.require_converged()?;
    let dbar = report.solution.clone();
    let field = plan.cauchy_plane(&dbar)?;
    let offset = Complex64::new(0.0, 0.5 * grid.spacing());
    let xs = f.xs();
    let above: Vec<Complex64> = xs.iter().map(|&x| x + offset).collect();
    let below: Vec<Complex64> = xs.iter().map(|&x| x - offset).collect();
    let samples = dbar.nonzero_samples();
    let ta = cauchy_sum(&samples, grid.cell_area(), &above);
    let tb = cauchy_sum(&samples, grid.cell_area(), &below);
    let boundary = LineFunction::new(f.half_window(), ta.iter().zip(&tb).map(|(a, b)| 0.5 * (a + b)).collect())?;
    Ok(InhomogeneousSolution { dbar, field, boundary, report })
}
