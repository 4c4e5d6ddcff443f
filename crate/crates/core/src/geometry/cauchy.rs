use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::CurveTrace;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct CurveCauchyReport {
    pub norm: f64,
    pub iterations: usize,
    pub relative_change_at_stop: f64,
    pub converged: bool,
    pub samples: usize,
}

/// Principal-value Cauchy matrix on the trace with zero diagonal, symmetrized
/// by the arclength weights: `A_ij = sqrt(ds_i ds_j) / (2 pi i (g_j - g_i))`.
///
/// `A` is similar to the weighted-space operator
/// `M_ij = ds_j / (2 pi i (g_j - g_i))`, so both share the norm. `A` is
/// skew-symmetric, hence `A* v = -conj(A conj(v))`.
struct CauchyMatrix {
    points: Vec<Complex64>,
    sqrt_ds: Vec<f64>,
}

impl CauchyMatrix {
    fn new(trace: &CurveTrace) -> Result<Self> {
        let pts = trace.points();
        let m = pts.len();
        let seg: Vec<f64> = pts.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
        if seg.iter().any(|&s| s == 0.0) {
            return Err(Error::Degenerate("consecutive trace points coincide".into()));
        }
        let sqrt_ds = (0..m)
            .map(|i| {
                let left = if i > 0 { seg[i - 1] } else { 0.0 };
                let right = if i + 1 < m { seg[i] } else { 0.0 };
                (0.5 * (left + right)).sqrt()
            })
            .collect();
        Ok(CauchyMatrix { points: pts.to_vec(), sqrt_ds })
    }

    fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let m = self.points.len();
        let scale = Complex64::new(0.0, 2.0 * PI).inv();
        let mut y = vec![Complex64::new(0.0, 0.0); m];
        for i in 0..m {
            let gi = self.points[i];
            let wi = self.sqrt_ds[i];
            let mut acc = Complex64::new(0.0, 0.0);
            for j in i + 1..m {
                let d = self.points[j] - gi;
                if d.norm_sqr() == 0.0 {
                    return Err(Error::Degenerate(format!("trace points {i} and {j} coincide")));
                }
                let a = d.inv() * (wi * self.sqrt_ds[j]);
                acc += a * x[j];
                y[j] -= a * x[i];
            }
            y[i] += acc;
        }
        for v in y.iter_mut() {
            *v *= scale;
        }
        Ok(y)
    }

    fn apply_adjoint(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let conj: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
        Ok(self.apply(&conj)?.into_iter().map(|v| -v.conj()).collect())
    }
}

fn l2(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Norm of the discretized Cauchy integral on the trace, by power
/// iteration on `A* A`.
pub fn curve_cauchy_operator(trace: &CurveTrace, tol: f64, max_iter: usize) -> Result<CurveCauchyReport> {
    let a = CauchyMatrix::new(trace)?;
    let m = trace.len();
    // fixed deterministic start with no special symmetry
    let mut x: Vec<Complex64> = (0..m)
        .map(|i| Complex64::new(1.0 + 0.5 * (1.3 * i as f64).sin(), 0.25 * (0.7 * i as f64).cos()))
        .collect();
    let s = l2(&x);
    x.iter_mut().for_each(|v| *v /= s);
    let mut prev: Option<f64> = None;
    let mut change = f64::INFINITY;
    for it in 1..=max_iter {
        let ax = a.apply(&x)?;
        let q = l2(&ax);
        if let Some(p) = prev {
            change = (q - p).abs() / q;
        }
        prev = Some(q);
        if change <= tol {
            return Ok(CurveCauchyReport { norm: q, iterations: it, relative_change_at_stop: change, converged: true, samples: m });
        }
        x = a.apply_adjoint(&ax)?;
        let s = l2(&x);
        if s == 0.0 {
            return Ok(CurveCauchyReport { norm: 0.0, iterations: it, relative_change_at_stop: 0.0, converged: true, samples: m });
        }
        x.iter_mut().for_each(|v| *v /= s);
    }
    Ok(CurveCauchyReport {
        norm: prev.unwrap_or(0.0),
        iterations: max_iter,
        relative_change_at_stop: change,
        converged: false,
        samples: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{trace_curve, Identity};

    #[test]
    fn adjoint_is_consistent() {
        let t = trace_curve(&Identity, 4.0, 64).unwrap().transformed(Complex64::new(0.6, 0.8), Complex64::new(1.0, 2.0)).unwrap();
        let a = CauchyMatrix::new(&t).unwrap();
        let x: Vec<Complex64> = (0..64).map(|i| Complex64::new((i as f64).sin(), (2.0 * i as f64).cos())).collect();
        let y: Vec<Complex64> = (0..64).map(|i| Complex64::new((0.3 * i as f64).cos(), 0.1 * i as f64)).collect();
        let ax = a.apply(&x).unwrap();
        let ay = a.apply_adjoint(&y).unwrap();
        let lhs: Complex64 = ax.iter().zip(&y).map(|(u, v)| u * v.conj()).sum();
        let rhs: Complex64 = x.iter().zip(&ay).map(|(u, v)| u * v.conj()).sum();
        assert!((lhs - rhs).norm() < 1e-12 * lhs.norm());
    }

    #[test]
    fn line_norm_approaches_one_half() {
        let t = trace_curve(&Identity, 8.0, 1024).unwrap();
        let r = curve_cauchy_operator(&t, 1e-9, 500).unwrap();
        assert!((r.norm - 0.5).abs() < 0.01, "{}", r.norm);
        assert!(r.norm < 0.5);
    }

    #[test]
    fn invariant_under_motions() {
        let t = trace_curve(&Identity, 8.0, 256).unwrap();
        let base = curve_cauchy_operator(&t, 1e-12, 1000).unwrap().norm;
        let moved = t.transformed(Complex64::from_polar(1.0, 0.9), Complex64::new(-3.0, 7.0)).unwrap();
        let other = curve_cauchy_operator(&moved, 1e-12, 1000).unwrap().norm;
        assert!((base - other).abs() <= 1e-10 * base);
    }
}
