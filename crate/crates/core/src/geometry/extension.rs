use num_complex::Complex64;

use super::evaluator::finite;
use super::{MapEvaluator, Provenance};
use crate::field::{ComplexField, Grid};
use crate::transforms::LineFunction;
use crate::{Error, Result};

/// Fourth-order centered differences of `rho` at `z` with step `step`,
/// returned as `(d rho, dbar rho)`.
pub fn wirtinger_fd<M: MapEvaluator + ?Sized>(rho: &M, z: Complex64, step: f64) -> Result<(Complex64, Complex64)> {
    let diff = |dir: Complex64| -> Result<Complex64> {
        let e = dir * step;
        let v = rho.eval_many(&[z + 2.0 * e, z + e, z - e, z - 2.0 * e])?;
        Ok((-v[0] + 8.0 * v[1] - 8.0 * v[2] + v[3]) / (12.0 * step))
    };
    let dx = diff(Complex64::new(1.0, 0.0))?;
    let dy = diff(Complex64::new(0.0, 1.0))?;
    let i = Complex64::new(0.0, 1.0);
    Ok((0.5 * (dx - i * dy), 0.5 * (dx + i * dy)))
}

/// `mu = dbar rho / d rho` by finite differences.
pub fn beltrami_fd<M: MapEvaluator + ?Sized>(rho: &M, z: Complex64, step: f64) -> Result<Complex64> {
    let (d, dbar) = wirtinger_fd(rho, z, step)?;
    if d.norm() == 0.0 {
        return Err(Error::Evaluator(z));
    }
    Ok(dbar / d)
}

/// Classical extension of an increasing `f: R -> R` to the upper half-plane,
///
/// `rho(x + iy) = (1/2) ∫_0^1 [f(x+ty) + f(x-ty)] dt + i k ∫_0^1 [f(x+ty) - f(x-ty)] dt`,
///
/// mirrored by `rho(conj z) = conj(rho(z))` below the axis. The imaginary
/// factor `k` defaults to 1, for which the identity extends to the identity.
/// Samples of `f` are joined piecewise linearly and continued linearly past
/// the window.
#[derive(Debug, Clone)]
pub struct BaExtension {
    xs: Vec<f64>,
    /// `f - (alpha x + beta)`, sampled.
    residual: Vec<f64>,
    /// Prefix integrals of the residual interpolant at the nodes.
    prefix: Vec<f64>,
    alpha: f64,
    beta: f64,
    imag_factor: f64,
}

impl BaExtension {
    pub fn imag_factor(&self) -> f64 {
        self.imag_factor
    }

    fn spacing(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    /// Residual interpolant, linear beyond the end nodes.
    fn g(&self, x: f64) -> f64 {
        let d = self.spacing();
        let m = self.xs.len();
        let t = (x - self.xs[0]) / d;
        let k = (t.floor().max(0.0) as usize).min(m - 2);
        let u = t - k as f64;
        self.residual[k] + u * (self.residual[k + 1] - self.residual[k])
    }

    /// Antiderivative of the residual interpolant, zero at the first node.
    fn big_g(&self, x: f64) -> f64 {
        let d = self.spacing();
        let m = self.xs.len();
        let t = (x - self.xs[0]) / d;
        let k = (t.floor().max(0.0) as usize).min(m - 2);
        let s = x - self.xs[k];
        let (a, b) = (self.residual[k], self.residual[k + 1]);
        self.prefix[k] + a * s + 0.5 * (b - a) / d * s * s
    }

    pub fn boundary(&self, x: f64) -> f64 {
        self.alpha * x + self.beta + self.g(x)
    }

    fn upper(&self, x: f64, y: f64) -> Complex64 {
        let (gp, g0, gm) = (self.big_g(x + y), self.big_g(x), self.big_g(x - y));
        let re = self.alpha * x + self.beta + (gp - gm) / (2.0 * y);
        let im = self.imag_factor * (self.alpha * y + (gp - 2.0 * g0 + gm) / y);
        Complex64::new(re, im)
    }

    /// `mu` sampled on a grid by finite differences with step
    /// `min(|y|/4, h/4)`.
    pub fn beltrami_field(&self, grid: &Grid) -> Result<ComplexField> {
        let h = grid.spacing();
        let mut values = Vec::with_capacity(grid.len());
        for (_, z) in grid.points() {
            values.push(beltrami_fd(self, z, (0.25 * z.im.abs()).min(0.25 * h))?);
        }
        ComplexField::from_values(*grid, values)
    }
}

impl MapEvaluator for BaExtension {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        let w = if z.im > 0.0 {
            self.upper(z.re, z.im)
        } else if z.im < 0.0 {
            self.upper(z.re, -z.im).conj()
        } else {
            Complex64::new(self.boundary(z.re), 0.0)
        };
        finite(z, w)
    }

    fn provenance(&self) -> Provenance {
        Provenance::Extension
    }

    fn notes(&self) -> String {
        format!(
            "boundary data on [{}, {}], continued linearly outside; imaginary factor {}",
            self.xs[0],
            self.xs[self.xs.len() - 1],
            self.imag_factor
        )
    }
}

/// Extension with the classical normalization (identity to identity).
pub fn ba_extension(f: &LineFunction) -> Result<BaExtension> {
    ba_extension_with_factor(f, 1.0)
}

pub fn ba_extension_with_factor(f: &LineFunction, imag_factor: f64) -> Result<BaExtension> {
    if !(imag_factor > 0.0) {
        return Err(Error::OutOfRange(format!("imaginary factor must be positive, got {imag_factor}")));
    }
    let xs = f.xs();
    let vals: Vec<f64> = f.values().iter().map(|v| v.re).collect();
    if let Some(k) = f.values().iter().position(|v| v.im != 0.0) {
        return Err(Error::NonMonotone(k));
    }
    if let Some(k) = vals.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::NonMonotone(k + 1));
    }
    let m = xs.len();
    // the affine part through the end samples is extended exactly
    let alpha = (vals[m - 1] - vals[0]) / (xs[m - 1] - xs[0]);
    let beta = vals[0] - alpha * xs[0];
    let residual: Vec<f64> = xs.iter().zip(&vals).map(|(x, v)| v - (alpha * x + beta)).collect();
    let d = f.spacing();
    let mut prefix = Vec::with_capacity(m);
    let mut acc = 0.0;
    prefix.push(0.0);
    for w in residual.windows(2) {
        acc += 0.5 * (w[0] + w[1]) * d;
        prefix.push(acc);
    }
    Ok(BaExtension { xs, residual, prefix, alpha, beta, imag_factor })
}
