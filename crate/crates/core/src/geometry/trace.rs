use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::MapEvaluator;
use crate::{Error, Result};

/// Samples of `rho` on a uniform parameter grid of `[-X, X]`.
#[derive(Debug, Clone, Serialize)]
pub struct CurveTrace {
    half_window: f64,
    params: Vec<f64>,
    points: Vec<Complex64>,
    cum_length: Vec<f64>,
}

impl CurveTrace {
    pub fn new(half_window: f64, params: Vec<f64>, points: Vec<Complex64>) -> Result<Self> {
        if params.len() != points.len() || params.len() < 2 {
            return Err(Error::Degenerate("trace needs matching params and at least two points".into()));
        }
        if params.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Degenerate("params must be strictly increasing".into()));
        }
        if let Some(z) = points.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Evaluator(*z));
        }
        let mut cum_length = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        cum_length.push(0.0);
        for w in points.windows(2) {
            acc += (w[1] - w[0]).norm();
            cum_length.push(acc);
        }
        Ok(CurveTrace { half_window, params, points, cum_length })
    }

    pub fn half_window(&self) -> f64 {
        self.half_window
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn cum_length(&self) -> &[f64] {
        &self.cum_length
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        *self.cum_length.last().unwrap()
    }

    /// Applies `z -> a z + b` to every point, keeping the parameters.
    pub fn transformed(&self, a: Complex64, b: Complex64) -> Result<CurveTrace> {
        CurveTrace::new(self.half_window, self.params.clone(), self.points.iter().map(|z| a * z + b).collect())
    }

    /// Index range of the middle half of the samples.
    pub fn middle(&self) -> std::ops::Range<usize> {
        let m = self.len();
        m / 4..(3 * m).div_ceil(4)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,re,im,cum_length")?;
        for i in 0..self.len() {
            let z = self.points[i];
            writeln!(out, "{},{},{},{}", self.params[i], z.re, z.im, self.cum_length[i])?;
        }
        Ok(())
    }
}

/// `gamma_i = rho(x_i)` with `x_i` uniform on `[-X, X]`, endpoints included.
pub fn trace_curve<M: MapEvaluator + ?Sized>(rho: &M, half_window: f64, samples: usize) -> Result<CurveTrace> {
    if samples < 64 {
        return Err(Error::OutOfRange(format!("trace needs at least 64 samples, got {samples}")));
    }
    if !(half_window > 0.0) {
        return Err(Error::OutOfRange("trace window must be positive".into()));
    }
    let step = 2.0 * half_window / (samples - 1) as f64;
    let params: Vec<f64> = (0..samples).map(|i| -half_window + i as f64 * step).collect();
    let zs: Vec<Complex64> = params.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let points = rho.eval_many(&zs)?;
    CurveTrace::new(half_window, params, points)
}

#[derive(Debug, Clone, Serialize)]
pub struct ChordArcReport {
    pub constant: f64,
    pub witness: (usize, usize),
    pub window: f64,
    pub samples: usize,
}

/// Largest arc-to-chord ratio over pairs in the middle half of the trace.
pub fn chord_arc_constant(trace: &CurveTrace) -> Result<ChordArcReport> {
    let pts = trace.points();
    let s = trace.cum_length();
    if pts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Degenerate("consecutive trace points coincide".into()));
    }
    let range = trace.middle();
    let mut best = (1.0, (range.start, range.start + 1));
    let mut first = true;
    for i in range.clone() {
        for j in i + 1..range.end {
            let chord = (pts[j] - pts[i]).norm();
            if chord == 0.0 {
                return Err(Error::Degenerate(format!("trace points {i} and {j} coincide")));
            }
            let ratio = (s[j] - s[i]) / chord;
            if first || ratio > best.0 {
                best = (ratio, (i, j));
                first = false;
            }
        }
    }
    Ok(ChordArcReport { constant: best.0, witness: best.1, window: trace.half_window(), samples: trace.len() })
}

/// Length of the segment `[p, q]` inside the open disc `B(c, r)`.
pub(crate) fn segment_in_disc(p: Complex64, q: Complex64, c: Complex64, r: f64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return 0.0;
    }
    let f = p - c;
    // |f + t d|^2 = r^2
    let b = (f.conj() * d).re / len2;
    let cc = (f.norm_sqr() - r * r) / len2;
    let disc = b * b - cc;
    if disc <= 0.0 {
        return 0.0;
    }
    let root = disc.sqrt();
    let t0 = (-b - root).max(0.0);
    let t1 = (-b + root).min(1.0);
    if t1 <= t0 {
        0.0
    } else {
        (t1 - t0) * len2.sqrt()
    }
}

/// Radii `R_max 2^{-k}` not below twice the longest segment, with `R_max`
/// half the chord across the middle half of the trace.
pub(crate) fn dyadic_radii(trace: &CurveTrace) -> Vec<f64> {
    let pts = trace.points();
    let range = trace.middle();
    let r_max = 0.5 * (pts[range.end - 1] - pts[range.start]).norm();
    let seg = pts.windows(2).map(|w| (w[1] - w[0]).norm()).fold(0.0, f64::max);
    let mut radii = Vec::new();
    let mut r = r_max;
    while r >= 2.0 * seg && r > 0.0 {
        radii.push(r);
        r *= 0.5;
    }
    if radii.is_empty() {
        radii.push(r_max);
    }
    radii
}

/// Arclength of the polyline inside `B(c, r)`.
pub(crate) fn length_in_disc(trace: &CurveTrace, c: Complex64, r: f64) -> f64 {
    trace
        .points()
        .windows(2)
        .filter(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (mid - c).norm() <= r + 0.5 * (w[1] - w[0]).norm()
        })
        .map(|w| segment_in_disc(w[0], w[1], c, r))
        .sum()
}

/// `sup H^1(Gamma ∩ B(z0, R)) / R` over trace points in the middle half and
/// dyadic radii.
pub fn regularity_check(trace: &CurveTrace) -> Result<f64> {
    if trace.len() < 2 {
        return Err(Error::Degenerate("empty trace".into()));
    }
    let radii = dyadic_radii(trace);
    let mut best: f64 = 0.0;
    for i in trace.middle() {
        let c = trace.points()[i];
        for &r in &radii {
            best = best.max(length_in_disc(trace, c, r) / r);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Serialize)]
pub struct BilipschitzProfile {
    pub lower: f64,
    pub upper: f64,
    /// Slope of `log ratio` against `log |z - w|` over pairs straddling the
    /// anchor, reported only when it differs from zero significantly.
    pub blowup_exponent: Option<f64>,
    pub pairs_used: usize,
}

/// Extreme difference quotients of `rho` over `pairs`, plus a power-law fit
/// on the pairs whose segment contains `anchor`.
pub fn bilipschitz_profile<M: MapEvaluator + ?Sized>(
    rho: &M,
    pairs: &[(Complex64, Complex64)],
    anchor: Complex64,
) -> Result<BilipschitzProfile> {
    let mut lower = f64::INFINITY;
    let mut upper: f64 = 0.0;
    let mut fit = Vec::new();
    for &(z, w) in pairs {
        let d = (z - w).norm();
        if d == 0.0 {
            return Err(Error::Degenerate(format!("pair ({z}, {w}) is not distinct")));
        }
        let ratio = (rho.eval(z)? - rho.eval(w)?).norm() / d;
        lower = lower.min(ratio);
        upper = upper.max(ratio);
        let straddles = ((z - anchor).norm() + (w - anchor).norm() - d).abs() <= 1e-12 * d;
        if straddles && ratio > 0.0 {
            fit.push((d.ln(), ratio.ln()));
        }
    }
    let blowup_exponent = power_law_slope(&fit);
    Ok(BilipschitzProfile { lower, upper, blowup_exponent, pairs_used: fit.len() })
}

fn power_law_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx;
    let resid: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = (resid / (n - 2.0) / sxx).sqrt();
    (slope.abs() > 0.02 && slope.abs() > 3.0 * stderr).then_some(slope)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Affine, ClosedForm, Identity};

    #[test]
    fn identity_and_affine_traces() {
        let t = trace_curve(&Identity, 5.0, 101).unwrap();
        assert!((t.total_length() - 10.0).abs() < 1e-12);
        assert_eq!(t.points()[50], Complex64::new(0.0, 0.0));
        let a = Complex64::new(1.5, -2.0);
        let t = trace_curve(&Affine { a, b: Complex64::new(3.0, 1.0) }, 5.0, 101).unwrap();
        assert!((t.total_length() - 10.0 * a.norm()).abs() < 1e-12);
        assert!(trace_curve(&Identity, 5.0, 10).is_err());
    }

    #[test]
    fn straight_line_constants() {
        let t = trace_curve(&Identity, 8.0, 512).unwrap();
        assert!((chord_arc_constant(&t).unwrap().constant - 1.0).abs() < 1e-12);
        let reg = regularity_check(&t).unwrap();
        assert!((reg - 2.0).abs() < 0.04, "{reg}");
    }

    #[test]
    fn witness_reproduces_constant() {
        let rho = ClosedForm::new(|z: Complex64| z + Complex64::new(0.0, z.re.sin()), "");
        let t = trace_curve(&rho, 10.0, 400).unwrap();
        let r = chord_arc_constant(&t).unwrap();
        let (i, j) = r.witness;
        let again = (t.cum_length()[j] - t.cum_length()[i]) / (t.points()[j] - t.points()[i]).norm();
        assert_eq!(again, r.constant);
        assert!(r.constant >= 1.0);
    }

    #[test]
    fn coincident_points_are_degenerate() {
        let pts = vec![Complex64::new(0.0, 0.0); 8];
        let t = CurveTrace::new(1.0, (0..8).map(|i| i as f64).collect(), pts).unwrap();
        assert!(matches!(chord_arc_constant(&t), Err(Error::Degenerate(_))));
    }

    #[test]
    fn segment_disc_lengths() {
        let c = Complex64::new(0.0, 0.0);
        let l = segment_in_disc(Complex64::new(-5.0, 0.0), Complex64::new(5.0, 0.0), c, 1.0);
        assert!((l - 2.0).abs() < 1e-14);
        let l = segment_in_disc(Complex64::new(0.0, 0.6), Complex64::new(3.0, 0.6), c, 1.0);
        assert!((l - 0.8).abs() < 1e-14);
        assert_eq!(segment_in_disc(Complex64::new(2.0, 2.0), Complex64::new(3.0, 2.0), c, 1.0), 0.0);
    }

    #[test]
    fn bilipschitz_of_linear_maps() {
        let pairs: Vec<_> = (1..20)
            .map(|k| (Complex64::new(0.1 * k as f64, 0.0), Complex64::new(-0.05 * k as f64, 0.0)))
            .collect();
        let anchor = Complex64::new(0.0, 0.0);
        let p = bilipschitz_profile(&Identity, &pairs, anchor).unwrap();
        assert_eq!((p.lower, p.upper, p.blowup_exponent), (1.0, 1.0, None));
        let p = bilipschitz_profile(&Affine { a: Complex64::new(2.0, 0.0), b: Complex64::new(0.0, 0.0) }, &pairs, anchor).unwrap();
        assert_eq!((p.lower, p.upper, p.blowup_exponent), (2.0, 2.0, None));
    }
}
