//! Resolution of `(I - mu S) h = Phi` and diagnostics of `mu S` in the
//! weighted space `L^2(dm / |y|)`.

mod norms;
mod solve;

pub use norms::{default_probes, inverse_weighted_bound, weighted_operator_norm, OperatorStats};
pub use solve::{neumann_solve, solve_beltrami, solve_inhomogeneous, InhomogeneousSolution, SolveReport, SolvedMap};

use num_complex::Complex64;
use serde::Serialize;

use crate::field::{indicator_ball, ComplexField, Grid};
use crate::{Error, Result};

/// A dilatation `mu` with `sup |mu| < 1`.
#[derive(Debug, Clone, Serialize)]
pub struct BeltramiCoefficient {
    #[serde(skip)]
    field: ComplexField,
    sup_bound: f64,
    support_radius: f64,
}

impl BeltramiCoefficient {
    pub fn new(field: ComplexField) -> Result<Self> {
        if !field.is_finite() {
            return Err(Error::InvalidCoefficient("non-finite values".into()));
        }
        let sup_bound = field.max_abs();
        if sup_bound >= 1.0 {
            return Err(Error::InvalidCoefficient(format!("sup |mu| = {sup_bound} is not below 1")));
        }
        let support_radius = field
            .nonzero_samples()
            .iter()
            .map(|(z, _)| z.norm())
            .fold(0.0, f64::max);
        Ok(BeltramiCoefficient { field, sup_bound, support_radius })
    }

    pub fn zero(grid: Grid) -> Self {
        BeltramiCoefficient { field: ComplexField::zeros(grid), sup_bound: 0.0, support_radius: 0.0 }
    }

    /// `c * chi_B(center, radius)`, mollified over `mollify_width`.
    pub fn ball(grid: &Grid, c: Complex64, center: Complex64, radius: f64, mollify_width: f64) -> Result<Self> {
        Self::new(indicator_ball(grid, center, radius, mollify_width)?.scale(c))
    }

    pub fn field(&self) -> &ComplexField {
        &self.field
    }

    pub fn grid(&self) -> &Grid {
        self.field.grid()
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    /// Largest `|z|` over samples where `mu` is nonzero.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn is_zero(&self) -> bool {
        self.sup_bound == 0.0
    }

    pub fn scale(&self, t: Complex64) -> Result<Self> {
        Self::new(self.field.scale(t))
    }

    /// `z -> conj(mu(conj z))`.
    pub fn conj_reflect(&self) -> Self {
        BeltramiCoefficient { field: self.field.conj_reflect(), ..self.clone() }
    }
}
