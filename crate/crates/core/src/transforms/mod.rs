//! Singular integral operators of the plane and of the real line.
//!
//! Plane operators are Fourier multipliers on a zero-padded copy of the grid:
//!
//! | operator            | multiplier              |
//! |---------------------|-------------------------|
//! | Beurling `S`        | `conj(xi) / xi`         |
//! | adjoint `S*`        | `xi / conj(xi)`         |
//! | Cauchy `T`          | `1 / (pi i xi)`         |
//!
//! with `xi = xi_1 + i xi_2` in cycles per unit length. Every multiplier is
//! zero at `xi = 0`. On the two Nyquist lines `xi_j` and `-xi_j` alias, so
//! multipliers there are made real to keep the reflection symmetries exact.
//! Line operators live in [`line`]; the difference-quotient kernel used for
//! rectifiability estimates lives in [`kernel`].

pub mod kernel;
pub mod line;

pub use kernel::{dq_kernel_transform, fit_kernel_constant, KernelFit};
pub use line::{cauchy_line_extension, cauchy_line_derivative, hilbert, plemelj_boundary, LineFunction};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fft::{frequencies, Fft2};
use crate::field::{ComplexField, Grid};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Cached FFT plan and multiplier tables for one grid.
///
/// Immutable after construction; transforms take `&self` and may run
/// concurrently on a shared plan.
#[derive(Debug)]
pub struct SpectralPlan {
    grid: Grid,
    padding_factor: usize,
    fft: Fft2,
    beurling: Vec<Complex64>,
    cauchy: Vec<Complex64>,
}

impl SpectralPlan {
    /// Whole-plane realization: the field is embedded in a box
    /// `padding_factor` times wider before the multiplier is applied.
    pub fn new(grid: Grid, padding_factor: usize) -> Result<Self> {
        if padding_factor < 2 || !padding_factor.is_power_of_two() {
            return Err(Error::OutOfRange(format!(
                "padding factor must be a power of two >= 2, got {padding_factor}"
            )));
        }
        Ok(Self::build(grid, padding_factor))
    }

    /// Torus realization without padding. Exact for fields that are periodic
    /// on the grid box (e.g. [`crate::field::bandlimited_noise`]).
    pub fn periodic(grid: Grid) -> Self {
        Self::build(grid, 1)
    }

    fn build(grid: Grid, padding_factor: usize) -> Self {
        let size = grid.n() * padding_factor;
        let freqs = frequencies(size, grid.spacing());
        let mut beurling = vec![ZERO; size * size];
        let mut cauchy = vec![ZERO; size * size];
        for (k, &f2) in freqs.iter().enumerate() {
            for (j, &f1) in freqs.iter().enumerate() {
                let xi = Complex64::new(f1, f2);
                if xi == ZERO {
                    continue;
                }
                if j == size / 2 || k == size / 2 {
                    // nearest real unit value keeps S unitary
                    beurling[k * size + j] = Complex64::new(if f1 * f1 >= f2 * f2 { 1.0 } else { -1.0 }, 0.0);
                } else {
                    beurling[k * size + j] = xi.conj() / xi;
                    cauchy[k * size + j] = 1.0 / (Complex64::new(0.0, PI) * xi);
                }
            }
        }
        SpectralPlan { grid, padding_factor, fft: Fft2::new(size), beurling, cauchy }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn padding_factor(&self) -> usize {
        self.padding_factor
    }

    pub fn is_periodic(&self) -> bool {
        self.padding_factor == 1
    }

    /// The padded grid on which the multipliers act.
    pub fn extended_grid(&self) -> Grid {
        if self.padding_factor == 1 {
            self.grid
        } else {
            self.grid.padded(self.padding_factor)
        }
    }

    /// Beurling transform, truncated back to the plan's grid.
    pub fn beurling(&self, f: &ComplexField) -> Result<ComplexField> {
        self.check(f)?;
        Ok(self.truncate(self.apply(f, Multiplier::Beurling, true)))
    }

    /// Beurling transform on the whole padded box.
    ///
    /// The padded operator is unitary on mean-zero data, so
    /// `beurling_extended(f).norm() == f.norm()` to rounding.
    pub fn beurling_extended(&self, f: &ComplexField) -> Result<ComplexField> {
        self.check(f)?;
        Ok(ComplexField::from_parts(self.extended_grid(), self.apply(f, Multiplier::Beurling, false), None))
    }

    pub fn beurling_adjoint(&self, f: &ComplexField) -> Result<ComplexField> {
        self.check(f)?;
        Ok(self.truncate(self.apply(f, Multiplier::BeurlingAdjoint, true)))
    }

    /// Plane Cauchy transform `Tf(z) = -(1/pi) ∫ f(w) / (w - z) dm(w)`.
    ///
    /// On padded plans the mean of the padded data is restored through a
    /// `mean * conj(z)` term (the multiplier drops it), and the additive
    /// constant is fixed by matching direct quadrature at the sample nearest
    /// the origin. Periodic plans return the mean-zero torus solution.
    pub fn cauchy_plane(&self, f: &ComplexField) -> Result<ComplexField> {
        self.check(f)?;
        let padded = self.apply(f, Multiplier::Cauchy, true);
        let mut out = self.truncate(padded);
        if self.is_periodic() {
            return Ok(out);
        }
        let size = self.grid.n() * self.padding_factor;
        let mean = f.values().iter().sum::<Complex64>() / (size * size) as f64;
        let grid = self.grid;
        for (i, z) in grid.points() {
            out.values_mut()[i] += mean * z.conj();
        }
        let reference = grid.nearest(Complex64::new(0.0, 0.0));
        let z_ref = grid.point_at(reference);
        let exact = cauchy_plane_direct(f, &[z_ref])[0];
        let shift = exact - out.values()[reference];
        for v in out.values_mut() {
            *v += shift;
        }
        Ok(out)
    }

    fn check(&self, f: &ComplexField) -> Result<()> {
        if f.grid() != &self.grid {
            return Err(Error::SupportViolation);
        }
        Ok(())
    }

    /// With `cropped` only the columns kept by `truncate` are valid.
    fn apply(&self, f: &ComplexField, which: Multiplier, cropped: bool) -> Vec<Complex64> {
        let n = self.grid.n();
        let size = n * self.padding_factor;
        let off = (size - n) / 2;
        let mut buf = vec![ZERO; size * size];
        for k in 0..n {
            let src = &f.values()[k * n..(k + 1) * n];
            buf[(k + off) * size + off..(k + off) * size + off + n].copy_from_slice(src);
        }
        self.fft.forward_rows(&mut buf, off..off + n);
        match which {
            Multiplier::Beurling => buf.iter_mut().zip(&self.beurling).for_each(|(v, m)| *v *= m),
            Multiplier::BeurlingAdjoint => {
                buf.iter_mut().zip(&self.beurling).for_each(|(v, m)| *v *= m.conj())
            }
            Multiplier::Cauchy => buf.iter_mut().zip(&self.cauchy).for_each(|(v, m)| *v *= m),
        }
        if cropped {
            self.fft.inverse_cols(&mut buf, off..off + n);
        } else {
            self.fft.inverse(&mut buf);
        }
        buf
    }

    fn truncate(&self, padded: Vec<Complex64>) -> ComplexField {
        let n = self.grid.n();
        if self.padding_factor == 1 {
            return ComplexField::from_parts(self.grid, padded, None);
        }
        let size = n * self.padding_factor;
        let off = (size - n) / 2;
        let mut values = Vec::with_capacity(n * n);
        for k in 0..n {
            values.extend_from_slice(&padded[(k + off) * size + off..(k + off) * size + off + n]);
        }
        ComplexField::from_parts(self.grid, values, None)
    }
}

#[derive(Clone, Copy)]
enum Multiplier {
    Beurling,
    BeurlingAdjoint,
    Cauchy,
}

/// Direct midpoint quadrature of `Tf` at arbitrary points.
///
/// A sample coinciding with an evaluation point is skipped; the kernel
/// integrates to zero over a square cell centered at the singularity.
pub fn cauchy_plane_direct(f: &ComplexField, points: &[Complex64]) -> Vec<Complex64> {
    let samples = f.nonzero_samples();
    let area = f.grid().cell_area();
    cauchy_sum(&samples, area, points)
}

pub(crate) fn cauchy_sum(
    samples: &[(Complex64, Complex64)],
    area: f64,
    points: &[Complex64],
) -> Vec<Complex64> {
    points
        .iter()
        .map(|&z| {
            let mut acc = ZERO;
            for &(w, v) in samples {
                let d = w - z;
                if d != ZERO {
                    acc += v * d.inv();
                }
            }
            acc * (-area / PI)
        })
        .collect()
}

/// Eighth-order centered differences `(d/dx, d/dy)` on the torus.
pub fn periodic_gradient(f: &ComplexField) -> (ComplexField, ComplexField) {
    const C: [f64; 4] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];
    let grid = *f.grid();
    let n = grid.n();
    let h = grid.spacing();
    let v = f.values();
    let mut dx = vec![ZERO; n * n];
    let mut dy = vec![ZERO; n * n];
    for k in 0..n {
        for j in 0..n {
            let mut ax = ZERO;
            let mut ay = ZERO;
            for (s, c) in C.iter().enumerate() {
                let s = s + 1;
                ax += (v[k * n + (j + s) % n] - v[k * n + (j + n - s) % n]) * *c;
                ay += (v[((k + s) % n) * n + j] - v[((k + n - s) % n) * n + j]) * *c;
            }
            dx[k * n + j] = ax / h;
            dy[k * n + j] = ay / h;
        }
    }
    (ComplexField::from_parts(grid, dx, None), ComplexField::from_parts(grid, dy, None))
}

/// Finite-difference Wirtinger derivatives `(∂f, ∂̄f)` on the torus.
pub fn wirtinger(f: &ComplexField) -> (ComplexField, ComplexField) {
    let (dx, dy) = periodic_gradient(f);
    let i = Complex64::new(0.0, 1.0);
    let d = dx.zip_with(&dy, |a, b| 0.5 * (a - i * b));
    let dbar = dx.zip_with(&dy, |a, b| 0.5 * (a + i * b));
    (d, dbar)
}
