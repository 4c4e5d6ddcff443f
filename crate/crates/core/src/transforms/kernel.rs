//! The difference-quotient kernel `K(x) = 2 log|(1 + x) / x|` and its
//! Fourier transform.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::quadrature::GaussLegendre;
use crate::{Error, Result};

const ORDER: usize = 20;
/// Interval `[-W, W]` integrated on the real axis; the tails go around
/// through the lower (or upper) half-plane.
const W: f64 = 2.0;

pub fn dq_kernel(x: f64) -> f64 {
    2.0 * ((1.0 + x) / x).abs().ln()
}

fn kernel_complex(x: Complex64) -> Complex64 {
    // (1 + x)/x = 1 + 1/x stays in the disc |w - 1| <= 1/2 on both tails
    2.0 * (1.0 + x.inv()).ln()
}

/// Samples `K_h^(xi)` where `K_h(x) = K(x/h)/h`, using `e^{-2 pi i x xi}`.
///
/// The value at `xi = 0`, where the transform has a jump, is reported as 0.
pub fn dq_kernel_transform(h_step: f64, freqs: &[f64]) -> Result<Vec<Complex64>> {
    if !(h_step > 0.0) || !h_step.is_finite() {
        return Err(Error::OutOfRange(format!("kernel step must be positive, got {h_step}")));
    }
    let gl = GaussLegendre::new(ORDER);
    Ok(freqs.iter().map(|&xi| unit_transform(&gl, h_step * xi)).collect())
}

fn unit_transform(gl: &GaussLegendre, xi: f64) -> Complex64 {
    if xi == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let phase = |x: f64| Complex64::from_polar(1.0, -2.0 * PI * x * xi);
    let mut total = Complex64::new(0.0, 0.0);
    let max_width = 0.25 / xi.abs().max(1.0);
    for (a, b, sa, sb) in [(-W, -1.0, false, true), (-1.0, 0.0, true, true), (0.0, W, true, false)] {
        for (p, q) in graded(a, b, sa, sb, max_width) {
            total += gl.integrate(p, q, |x| phase(x) * dq_kernel(x));
        }
    }
    // x = +-W - i s t, t >= 0, with s = sgn(xi) so the exponential decays
    let s = xi.signum();
    let decay = 2.0 * PI * xi.abs();
    let dir = Complex64::new(0.0, -s);
    let tail = |x0: f64, t: f64| {
        let x = x0 + dir * t;
        kernel_complex(x) * (Complex64::new(0.0, -2.0 * PI * xi) * x).exp()
    };
    let mut right = Complex64::new(0.0, 0.0);
    let mut left = Complex64::new(0.0, 0.0);
    let horizon = 45.0 / decay;
    let mut a = 0.0;
    let mut width = (0.25 / decay).min(0.5);
    while a < horizon {
        let b = a + width;
        right += gl.integrate(a, b, |t| tail(W, t));
        left += gl.integrate(a, b, |t| tail(-W, t));
        a = b;
        width *= 1.5;
    }
    total + dir * (right - left)
}

/// Splits `[a, b]` into panels graded geometrically toward singular
/// endpoints and no wider than `max_width`.
fn graded(a: f64, b: f64, sing_a: bool, sing_b: bool, max_width: f64) -> Vec<(f64, f64)> {
    let mut cuts = vec![a, b];
    let mid = 0.5 * (a + b);
    for k in 1..=40 {
        let d = (b - a) * 0.5f64.powi(k);
        if sing_a && a + d < mid {
            cuts.push(a + d);
        }
        if sing_b && b - d > mid {
            cuts.push(b - d);
        }
    }
    if sing_a && sing_b {
        cuts.push(mid);
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut panels = Vec::new();
    for w in cuts.windows(2) {
        let pieces = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        let step = (w[1] - w[0]) / pieces as f64;
        for i in 0..pieces {
            panels.push((w[0] + i as f64 * step, w[0] + (i + 1) as f64 * step));
        }
    }
    panels
}

/// Least-squares fit of `values ≈ c (e^{2 pi i xi} - 1) / |xi|`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelFit {
    pub constant: Complex64,
    /// `max |values / shape - c| / |c|` over the frequencies used.
    pub max_relative_deviation: f64,
    pub samples_used: usize,
}

/// Frequencies with `|xi| < min_freq` and those where the shape nearly
/// vanishes (close to nonzero integers) are excluded.
pub fn fit_kernel_constant(freqs: &[f64], values: &[Complex64], min_freq: f64) -> Result<KernelFit> {
    let shape = |xi: f64| (Complex64::new(0.0, 2.0 * PI * xi).exp() - 1.0) / xi.abs();
    let used: Vec<(Complex64, Complex64)> = freqs
        .iter()
        .zip(values)
        .filter(|(xi, _)| xi.abs() >= min_freq)
        .filter(|(xi, _)| (Complex64::new(0.0, 2.0 * PI * **xi).exp() - 1.0).norm() > 0.2)
        .map(|(&xi, &v)| (shape(xi), v))
        .collect();
    if used.is_empty() {
        return Err(Error::OutOfRange("no frequencies left to fit".into()));
    }
    let num: Complex64 = used.iter().map(|(s, v)| s.conj() * v).sum();
    let den: f64 = used.iter().map(|(s, _)| s.norm_sqr()).sum();
    let c = num / den;
    let dev = used.iter().map(|(s, v)| (v / s - c).norm()).fold(0.0, f64::max) / c.norm();
    Ok(KernelFit { constant: c, max_relative_deviation: dev, samples_used: used.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;

    fn closed_form(xi: f64) -> Complex64 {
        -(Complex64::new(0.0, 2.0 * PI * xi).exp() - 1.0) / xi.abs()
    }

    #[test]
    fn matches_closed_form_transform() {
        // K^ = 2 (e^{2 pi i xi} - 1) * (FT of log|x|) and FT log|x| = -1/(2|xi|) off 0
        let freqs: Vec<f64> = (1..=60).map(|i| -3.0 + 0.1 * i as f64 + 0.013).collect();
        let vals = dq_kernel_transform(1.0, &freqs).unwrap();
        for (xi, v) in freqs.iter().zip(&vals) {
            let e = closed_form(*xi);
            assert!((v - e).norm() < 1e-8 * e.norm().max(1.0), "xi={xi}: {v} vs {e}");
        }
    }

    #[test]
    fn damped_transform_matches_independent_quadrature() {
        // independent check of the real-axis part: the contour and the
        // graded panels must agree with plain adaptive quadrature on [-2, 2]
        let xi = 0.7;
        let gl = GaussLegendre::new(ORDER);
        let mut ours = Complex64::new(0.0, 0.0);
        for (a, b, sa, sb) in [(-W, -1.0, false, true), (-1.0, 0.0, true, true), (0.0, W, true, false)] {
            for (p, q) in graded(a, b, sa, sb, 0.1) {
                ours += gl.integrate(p, q, |x| Complex64::from_polar(1.0, -2.0 * PI * x * xi) * dq_kernel(x));
            }
        }
        let eps = 1e-9;
        let re = |x: f64| dq_kernel(x) * (2.0 * PI * x * xi).cos();
        let reference: f64 = [(-W, -1.0 - eps), (-1.0 + eps, -eps), (eps, W)]
            .iter()
            .map(|&(a, b)| adaptive_simpson(&re, a, b, 1e-11))
            .sum();
        assert!((ours.re - reference).abs() < 1e-6);
    }

    #[test]
    fn dilation_rule() {
        let freqs = [0.3, -0.77, 1.9, 4.2];
        for h in [0.25, 0.5, 2.0] {
            let scaled: Vec<f64> = freqs.iter().map(|x| h * x).collect();
            let a = dq_kernel_transform(h, &freqs).unwrap();
            let b = dq_kernel_transform(1.0, &scaled).unwrap();
            for (u, v) in a.iter().zip(&b) {
                assert!((u - v).norm() <= 1e-6 * v.norm());
            }
        }
    }

    #[test]
    fn fitted_constant_is_minus_one() {
        let freqs: Vec<f64> = (-400..=400).map(|i| i as f64 * 0.01 + 0.003).collect();
        let vals = dq_kernel_transform(1.0, &freqs).unwrap();
        let fit = fit_kernel_constant(&freqs, &vals, 0.05).unwrap();
        assert!((fit.constant + 1.0).norm() < 1e-6);
        assert!(fit.max_relative_deviation < 1e-6);
    }

    #[test]
    fn rejects_bad_step() {
        assert!(dq_kernel_transform(0.0, &[1.0]).is_err());
        assert!(dq_kernel_transform(-1.0, &[1.0]).is_err());
    }
}
