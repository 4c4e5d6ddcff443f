//! Carleson norms, the half-plane kernel bound, and the rectifiability
//! energy.

use num_complex::Complex64;
use serde::Serialize;

use crate::beltrami::BeltramiCoefficient;
use crate::field::{ComplexField, Grid, Weight};
use crate::geometry::CurveTrace;
use crate::{Error, Result};

/// `|mu|^2 / |y|` on the grid.
pub fn carleson_density(mu: &BeltramiCoefficient) -> ComplexField {
    mu.field().map(|z, v| Complex64::new(v.norm_sqr() * Weight::InvAbsY.at(z), 0.0))
}

#[derive(Debug, Clone, Copy)]
pub enum CarlesonGeometry<'a> {
    /// Centers at the grid abscissae on the real axis.
    Line,
    /// Centers at the trace points.
    Curve(&'a CurveTrace),
}

#[derive(Debug, Clone, Serialize)]
pub struct CarlesonReport {
    pub norm: f64,
    pub witness_center: Complex64,
    pub witness_radius: f64,
    pub family: String,
    pub centers: usize,
    pub radii: Vec<f64>,
}

/// Row prefix sums of a nonnegative density, for fast disc masses.
pub struct BallIntegrator {
    grid: Grid,
    prefix: Vec<f64>,
}

impl BallIntegrator {
    pub fn new(nu: &ComplexField) -> Result<Self> {
        let grid = *nu.grid();
        let n = grid.n();
        if let Some(v) = nu.values().iter().find(|v| v.im != 0.0 || v.re < 0.0) {
            return Err(Error::OutOfRange(format!("density must be real and nonnegative, found {v}")));
        }
        let mut prefix = vec![0.0; n * (n + 1)];
        for k in 0..n {
            let row = &nu.values()[k * n..(k + 1) * n];
            let out = &mut prefix[k * (n + 1)..(k + 1) * (n + 1)];
            for j in 0..n {
                out[j + 1] = out[j] + row[j].re;
            }
        }
        Ok(BallIntegrator { grid, prefix })
    }

    /// Midpoint quadrature of the density over the open disc `B(c, r)`.
    pub fn mass(&self, c: Complex64, r: f64) -> f64 {
        let g = &self.grid;
        let (n, h, l) = (g.n(), g.spacing(), g.half_width());
        let k_lo = (((c.im - r + l) / h - 0.5).floor() + 1.0).max(0.0) as usize;
        let k_hi = ((c.im + r + l) / h - 0.5).ceil() - 1.0;
        if k_hi < 0.0 {
            return 0.0;
        }
        let k_hi = (k_hi as usize).min(n - 1);
        let mut total = 0.0;
        for k in k_lo..=k_hi {
            let dy = g.y(k) - c.im;
            let w2 = r * r - dy * dy;
            if w2 <= 0.0 {
                continue;
            }
            let w = w2.sqrt();
            let j_lo = ((c.re - w + l) / h - 0.5).floor() + 1.0;
            let j_hi = ((c.re + w + l) / h - 0.5).ceil() - 1.0;
            if j_hi < 0.0 || j_lo > (n - 1) as f64 {
                continue;
            }
            let j_lo = j_lo.max(0.0) as usize;
            let j_hi = (j_hi as usize).min(n - 1);
            if j_hi < j_lo {
                continue;
            }
            let row = &self.prefix[k * (n + 1)..(k + 1) * (n + 1)];
            total += row[j_hi + 1] - row[j_lo];
        }
        total * g.cell_area()
    }
}

/// Radii `2h, 4h, ...` up to the half-width.
pub fn dyadic_grid_radii(grid: &Grid) -> Vec<f64> {
    let mut radii = Vec::new();
    let mut r = 2.0 * grid.spacing();
    while r <= grid.half_width() * (1.0 + 1e-12) {
        radii.push(r);
        r *= 2.0;
    }
    radii
}

/// `sup nu(B(x0, r)) / r` over the centers of `geometry` and dyadic radii.
pub fn carleson_norm(nu: &ComplexField, geometry: CarlesonGeometry<'_>) -> Result<CarlesonReport> {
    let grid = *nu.grid();
    let integrator = BallIntegrator::new(nu)?;
    let radii = dyadic_grid_radii(&grid);
    let (centers, family): (Vec<Complex64>, String) = match geometry {
        CarlesonGeometry::Line => (
            (0..grid.n()).map(|j| Complex64::new(grid.x(j), 0.0)).collect(),
            format!("real-axis centers x_j (spacing {}), dyadic radii 2h..L", grid.spacing()),
        ),
        CarlesonGeometry::Curve(trace) => {
            if trace.is_empty() {
                return Err(Error::Degenerate("empty trace".into()));
            }
            (trace.points().to_vec(), format!("{} trace points, dyadic radii 2h..L", trace.len()))
        }
    };
    let mut best = (0.0, centers[0], radii[0]);
    for &c in &centers {
        for &r in &radii {
            let v = integrator.mass(c, r) / r;
            if v > best.0 {
                best = (v, c, r);
            }
        }
    }
    Ok(CarlesonReport {
        norm: best.0,
        witness_center: best.1,
        witness_radius: best.2,
        family,
        centers: centers.len(),
        radii,
    })
}

/// `k(z, w) = |Im z|^{1/2} |Im w|^{1/2} / |w - z|^3`.
pub fn lemma1_kernel(z: Complex64, w: Complex64) -> f64 {
    (z.im.abs() * w.im.abs()).sqrt() / (w - z).norm().powi(3)
}

/// `(K f)(z) = ∫_{Im w < 0} k(z, w) f(w) dm(w)` over the grid.
pub fn lemma1_apply(f: &ComplexField, z: Complex64) -> Result<Complex64> {
    let g = f.grid();
    if z.im < 0.5 * g.spacing() {
        return Err(Error::OutOfRange(format!("evaluation point {z} must satisfy Im z >= h/2")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, w) in g.points() {
        if w.im < 0.0 && w != z {
            acc += f.values()[i] * lemma1_kernel(z, w);
        }
    }
    Ok(acc * g.cell_area())
}

/// `∫_{Im w < 0} k(z, w) dm(w)` over the grid; equals `pi` on the whole
/// lower half-plane.
pub fn lemma1_row_integral(z: Complex64, grid: &Grid) -> Result<f64> {
    let ones = ComplexField::from_fn(*grid, |_| Complex64::new(1.0, 0.0));
    Ok(lemma1_apply(&ones, z)?.re)
}

/// `∫_{Im z > 0} k(z, w) dm(z)` for `w` in the lower half-plane.
pub fn lemma1_column_integral(w: Complex64, grid: &Grid) -> Result<f64> {
    if w.im > -0.5 * grid.spacing() {
        return Err(Error::OutOfRange(format!("evaluation point {w} must satisfy Im w <= -h/2")));
    }
    let total: f64 = grid.points().filter(|(_, z)| z.im > 0.0).map(|(_, z)| lemma1_kernel(z, w)).sum();
    Ok(total * grid.cell_area())
}

/// `∫ |h|^2 / |y| dm`.
pub fn rectifiability_energy(h: &ComplexField) -> f64 {
    h.norm_sqr(Weight::InvAbsY)
}
