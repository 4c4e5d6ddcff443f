//! Functions on the real line and their Cauchy integrals.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::fft::Fft1;
use crate::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Samples `f(x_i)` at `x_i = -X + (i + 1/2) d`, `d = 2X / m`.
///
/// Functions built through the `compact` constructors vanish outside
/// `[-X/2, X/2]`, which leaves a zero margin as wide as the support.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LineFunction {
    half_window: f64,
    values: Vec<Complex64>,
}

impl LineFunction {
    pub fn new(half_window: f64, values: Vec<Complex64>) -> Result<Self> {
        if !(half_window > 0.0) || values.len() < 2 {
            return Err(Error::OutOfRange("line function needs a positive window and 2+ samples".into()));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::OutOfRange("line function samples must be finite".into()));
        }
        Ok(LineFunction { half_window, values })
    }

    /// Samples `f` on the whole window.
    pub fn from_fn<F: FnMut(f64) -> Complex64>(half_window: f64, samples: usize, mut f: F) -> Result<Self> {
        let d = 2.0 * half_window / samples as f64;
        let values = (0..samples).map(|i| f(-half_window + (i as f64 + 0.5) * d)).collect();
        Self::new(half_window, values)
    }

    /// Samples `f` on `[-X/2, X/2]` and zero elsewhere.
    pub fn compact<F: FnMut(f64) -> Complex64>(half_window: f64, samples: usize, mut f: F) -> Result<Self> {
        let cut = 0.5 * half_window;
        Self::from_fn(half_window, samples, |x| if x.abs() <= cut { f(x) } else { ZERO })
    }

    pub fn compact_real<F: FnMut(f64) -> f64>(half_window: f64, samples: usize, mut f: F) -> Result<Self> {
        Self::compact(half_window, samples, |x| Complex64::new(f(x), 0.0))
    }

    pub fn half_window(&self) -> f64 {
        self.half_window
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_window / self.values.len() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -self.half_window + (i as f64 + 0.5) * self.spacing()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn map<F: FnMut(f64, Complex64) -> Complex64>(&self, mut f: F) -> LineFunction {
        let values = self.values.iter().enumerate().map(|(i, v)| f(self.x(i), *v)).collect();
        LineFunction { half_window: self.half_window, values }
    }

    pub fn scale(&self, t: Complex64) -> LineFunction {
        self.map(|_, v| v * t)
    }

    pub fn sub(&self, other: &LineFunction) -> LineFunction {
        assert_eq!(self.len(), other.len());
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        LineFunction { half_window: self.half_window, values }
    }

    /// `∫ f dx` by the midpoint rule.
    pub fn integrate(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.spacing()
    }

    /// `∫ f g dx` (no conjugation).
    pub fn pairing(&self, other: &LineFunction) -> Complex64 {
        assert_eq!(self.len(), other.len());
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<Complex64>() * self.spacing()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spacing()).sqrt()
    }

    pub(crate) fn nonzero(&self) -> Vec<(f64, Complex64)> {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != ZERO)
            .map(|(i, v)| (self.x(i), *v))
            .collect()
    }
}

fn check_off_line(f: &LineFunction, points: &[Complex64]) -> Result<()> {
    let d = f.spacing();
    match points.iter().find(|z| z.im.abs() < d) {
        Some(z) => Err(Error::TooCloseToLine(*z)),
        None => Ok(()),
    }
}

/// `C_f(z) = (1 / 2 pi i) ∫ f(t) / (t - z) dt` at points with `|Im z| >= d`.
pub fn cauchy_line_extension(f: &LineFunction, points: &[Complex64]) -> Result<Vec<Complex64>> {
    check_off_line(f, points)?;
    let samples = f.nonzero();
    let scale = f.spacing() / Complex64::new(0.0, 2.0 * PI);
    Ok(points
        .iter()
        .map(|&z| samples.iter().map(|&(t, v)| v / (t - z)).sum::<Complex64>() * scale)
        .collect())
}

/// `C_f'(z) = (1 / 2 pi i) ∫ f(t) / (t - z)^2 dt`, the derivative of the
/// extension off the line (no distributional term).
pub fn cauchy_line_derivative(f: &LineFunction, points: &[Complex64]) -> Result<Vec<Complex64>> {
    check_off_line(f, points)?;
    let samples = f.nonzero();
    let scale = f.spacing() / Complex64::new(0.0, 2.0 * PI);
    Ok(points
        .iter()
        .map(|&z| {
            samples
                .iter()
                .map(|&(t, v)| {
                    let w = (t - z).inv();
                    v * w * w
                })
                .sum::<Complex64>()
                * scale
        })
        .collect())
}

/// Discrete Hilbert transform `Hf(x) = (1/pi) PV ∫ f(y) / (x - y) dy`.
///
/// Realized as the lattice Fourier multiplier `-i sgn(xi)`: its kernel is
/// `2 / (pi k)` on odd offsets and zero on even ones, applied by an exact
/// linear convolution, so no periodization enters.
pub fn hilbert(f: &LineFunction) -> LineFunction {
    let m = f.len();
    let size = (3 * m).next_power_of_two();
    let fft = Fft1::new(size);
    let mut a = vec![ZERO; size];
    a[..m].copy_from_slice(f.values());
    // kernel offsets -(m-1)..=(m-1) stored at index offset + (m - 1)
    let mut b = vec![ZERO; size];
    for idx in 0..(2 * m - 1) {
        let k = idx as i64 - (m as i64 - 1);
        if k % 2 != 0 {
            b[idx] = Complex64::new(2.0 / (PI * k as f64), 0.0);
        }
    }
    fft.forward(&mut a);
    fft.forward(&mut b);
    a.iter_mut().zip(&b).for_each(|(x, y)| *x *= y);
    fft.inverse(&mut a);
    LineFunction { half_window: f.half_window(), values: a[m - 1..2 * m - 1].to_vec() }
}

/// Boundary values `(f_+, f_-)` of the Cauchy integral of `f`:
/// `f_± = ±f/2 + (1 / 2 pi i) PV ∫ f(t) / (t - x) dt`.
pub fn plemelj_boundary(f: &LineFunction) -> (LineFunction, LineFunction) {
    let pv = pv_part(f);
    let plus = pv.values.iter().zip(f.values()).map(|(p, v)| p + 0.5 * v).collect();
    let minus = pv.values.iter().zip(f.values()).map(|(p, v)| p - 0.5 * v).collect();
    (
        LineFunction { half_window: f.half_window(), values: plus },
        LineFunction { half_window: f.half_window(), values: minus },
    )
}

/// The common principal-value part `(1 / 2 pi i) PV ∫ f(t)/(t - x) dt = (i/2) Hf`.
pub fn pv_part(f: &LineFunction) -> LineFunction {
    hilbert(f).scale(Complex64::new(0.0, 0.5))
}
