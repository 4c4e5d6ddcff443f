//! The discretized plane: staggered square grids, complex grid functions,
//! midpoint quadrature, and the plain and `|y|`-weighted L² norms.

mod io;

pub use io::{read_binary, write_binary, write_csv};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fft::{frequencies, Fft2};
use crate::{Error, Result};

/// Vertical offset of the lattice, in units of the spacing.
pub const STAGGER: f64 = 0.5;

/// Uniform `n x n` lattice on `[-L, L]^2` with samples at cell centers.
///
/// Sample `(j, k)` sits at `(-L + (j + 1/2) h) + i (-L + (k + 1/2) h)`, so no
/// sample lies on the real axis and `min |Im z| = h / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    half_width: f64,
    n: usize,
}

impl Grid {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!("half width must be positive, got {half_width}")));
        }
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n must be a power of two >= 16, got {n}")));
        }
        Ok(Grid { half_width, n })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Area of one cell.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + STAGGER) * self.spacing()
    }

    pub fn y(&self, k: usize) -> f64 {
        -self.half_width + (k as f64 + STAGGER) * self.spacing()
    }

    pub fn point(&self, j: usize, k: usize) -> Complex64 {
        Complex64::new(self.x(j), self.y(k))
    }

    /// Row-major index: rows are indexed by the vertical coordinate `k`.
    pub fn index(&self, j: usize, k: usize) -> usize {
        k * self.n + j
    }

    pub fn point_at(&self, index: usize) -> Complex64 {
        self.point(index % self.n, index / self.n)
    }

    /// Iterates over `(index, z)` in storage order.
    pub fn points(&self) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        (0..self.len()).map(move |i| (i, self.point_at(i)))
    }

    /// Nearest sample index to `z`, clamped to the lattice.
    pub fn nearest(&self, z: Complex64) -> usize {
        let h = self.spacing();
        let clamp = |v: f64| -> usize {
            let idx = ((v + self.half_width) / h - STAGGER).round();
            idx.clamp(0.0, (self.n - 1) as f64) as usize
        };
        self.index(clamp(z.re), clamp(z.im))
    }

    /// The same lattice embedded in a box `factor` times wider.
    pub fn padded(&self, factor: usize) -> Grid {
        Grid { half_width: self.half_width * factor as f64, n: self.n * factor }
    }

    pub fn contains_ball(&self, center: Complex64, radius: f64) -> bool {
        center.re.abs() + radius <= self.half_width && center.im.abs() + radius <= self.half_width
    }
}

/// Weight applied inside [`ComplexField::norm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weight {
    Unweighted,
    /// `1 / |Im z|`, the weight of `L^2(dm / |y|)`.
    InvAbsY,
    /// `|Im z|`.
    AbsY,
}

impl Weight {
    pub fn at(self, z: Complex64) -> f64 {
        match self {
            Weight::Unweighted => 1.0,
            Weight::InvAbsY => 1.0 / z.im.abs(),
            Weight::AbsY => z.im.abs(),
        }
    }
}

/// Complex samples on a [`Grid`].
///
/// `support` is the declared support radius (about the origin) when the field
/// was built as compactly supported; values outside it are exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
    support: Option<f64>,
}

impl ComplexField {
    pub fn zeros(grid: Grid) -> Self {
        ComplexField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()], support: Some(0.0) }
    }

    pub fn from_values(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidGrid(format!("non-finite value at index {i}")));
        }
        Ok(ComplexField { grid, values, support: None })
    }

    pub fn from_fn<F: FnMut(Complex64) -> Complex64>(grid: Grid, mut f: F) -> Self {
        let values = grid.points().map(|(_, z)| f(z)).collect();
        ComplexField { grid, values, support: None }
    }

    /// Declares a compact support radius, zeroing every sample outside it.
    pub fn with_support(mut self, radius: f64) -> Result<Self> {
        if radius > 0.5 * self.grid.half_width + 1e-12 {
            return Err(Error::OutOfRange(format!(
                "support radius {radius} exceeds half the domain half width {}",
                self.grid.half_width
            )));
        }
        for (i, z) in self.grid.points() {
            if z.norm() > radius {
                self.values[i] = Complex64::new(0.0, 0.0);
            }
        }
        self.support = Some(radius);
        Ok(self)
    }

    pub(crate) fn from_parts(grid: Grid, values: Vec<Complex64>, support: Option<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ComplexField { grid, values, support }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn support(&self) -> Option<f64> {
        self.support
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[self.grid.index(j, k)]
    }

    /// `h^2 * sum(values)`: the midpoint rule for `∫ f dm`.
    pub fn integrate(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_area()
    }

    pub fn norm(&self, weight: Weight) -> f64 {
        self.norm_sqr(weight).sqrt()
    }

    pub fn norm_sqr(&self, weight: Weight) -> f64 {
        let sum: f64 = match weight {
            Weight::Unweighted => self.values.iter().map(|v| v.norm_sqr()).sum(),
            _ => self.grid.points().map(|(i, z)| self.values[i].norm_sqr() * weight.at(z)).sum(),
        };
        sum * self.grid.cell_area()
    }

    /// `∫ f conj(g) w dm`.
    pub fn inner(&self, other: &ComplexField, weight: Weight) -> Complex64 {
        assert_eq!(self.grid, other.grid, "inner product of fields on different grids");
        let sum: Complex64 = self
            .grid
            .points()
            .map(|(i, z)| self.values[i] * other.values[i].conj() * weight.at(z))
            .sum();
        sum * self.grid.cell_area()
    }

    pub fn scale(&self, t: Complex64) -> ComplexField {
        self.map(|_, v| v * t)
    }

    pub fn map<F: FnMut(Complex64, Complex64) -> Complex64>(&self, mut f: F) -> ComplexField {
        let values = self.grid.points().map(|(i, z)| f(z, self.values[i])).collect();
        ComplexField { grid: self.grid, values, support: self.support }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with<F: FnMut(Complex64, Complex64) -> Complex64>(
        &self,
        other: &ComplexField,
        mut f: F,
    ) -> ComplexField {
        assert_eq!(self.grid, other.grid, "combining fields on different grids");
        let values = self.values.iter().zip(&other.values).map(|(a, b)| f(*a, *b)).collect();
        let support = match (self.support, other.support) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        ComplexField { grid: self.grid, values, support }
    }

    pub fn add(&self, other: &ComplexField) -> ComplexField {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexField) -> ComplexField {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product; the support shrinks to the smaller declared one.
    pub fn mul(&self, other: &ComplexField) -> ComplexField {
        let mut out = self.zip_with(other, |a, b| a * b);
        out.support = match (self.support, other.support) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (Some(a), None) | (None, Some(a)) => Some(a),
            (None, None) => None,
        };
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }

    /// Samples with a nonzero value, as `(z, value)` pairs.
    pub fn nonzero_samples(&self) -> Vec<(Complex64, Complex64)> {
        self.grid
            .points()
            .filter(|(i, _)| self.values[*i] != Complex64::new(0.0, 0.0))
            .map(|(i, z)| (z, self.values[i]))
            .collect()
    }

    /// Reflection `z -> conj(z)` combined with complex conjugation of the values.
    pub fn conj_reflect(&self) -> ComplexField {
        let n = self.grid.n;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for k in 0..n {
            for j in 0..n {
                values[self.grid.index(j, n - 1 - k)] = self.values[self.grid.index(j, k)].conj();
            }
        }
        ComplexField { grid: self.grid, values, support: self.support }
    }
}

/// Smooth step: 0 for `t <= 0`, 1 for `t >= 1`, C-infinity in between.
fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    if t >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / t).exp();
    let b = (-1.0 / (1.0 - t)).exp();
    a / (a + b)
}

/// Indicator of `B(center, radius)`; a smooth radial ramp of width
/// `mollify_width` inside the rim when the width is positive.
pub fn indicator_ball(
    grid: &Grid,
    center: Complex64,
    radius: f64,
    mollify_width: f64,
) -> Result<ComplexField> {
    if !(radius > 0.0) || !(mollify_width >= 0.0) || mollify_width > radius {
        return Err(Error::OutOfRange(format!(
            "radius {radius} and mollify width {mollify_width} must satisfy 0 <= width <= radius"
        )));
    }
    if !grid.contains_ball(center, radius) {
        return Err(Error::BallOutsideDomain { center, radius, half_width: grid.half_width });
    }
    let field = ComplexField::from_fn(*grid, |z| {
        let d = (z - center).norm();
        let v = if mollify_width == 0.0 {
            if d < radius {
                1.0
            } else {
                0.0
            }
        } else {
            smooth_step((radius - d) / mollify_width)
        };
        Complex64::new(v, 0.0)
    });
    let support = center.norm() + radius;
    Ok(ComplexField { support: Some(support), ..field })
}

/// Deterministic zero-mean random field with Fourier support in
/// `|xi| <= cutoff * n / (2L)`.
pub fn bandlimited_noise(grid: &Grid, seed: u64, cutoff: f64) -> Result<ComplexField> {
    if !(cutoff > 0.0 && cutoff <= 0.5) {
        return Err(Error::OutOfRange(format!("cutoff must lie in (0, 1/2], got {cutoff}")));
    }
    let n = grid.n();
    let freqs = frequencies(n, grid.spacing());
    let limit = cutoff * n as f64 / (2.0 * grid.half_width());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); grid.len()];
    for k in 0..n {
        for j in 0..n {
            // draw for every mode so the stream does not depend on the cutoff
            let a: f64 = rng.gen_range(-1.0..1.0);
            let b: f64 = rng.gen_range(-1.0..1.0);
            let r = (freqs[j] * freqs[j] + freqs[k] * freqs[k]).sqrt();
            if (j, k) != (0, 0) && r <= limit {
                spectrum[k * n + j] = Complex64::new(a, b);
            }
        }
    }
    Fft2::new(n).inverse(&mut spectrum);
    // unit variance per mode-count keeps amplitudes O(1) regardless of n
    let modes = spectrum.len() as f64;
    for v in spectrum.iter_mut() {
        *v *= modes.sqrt() / 4.0;
    }
    Ok(ComplexField { grid: *grid, values: spectrum, support: None })
}
