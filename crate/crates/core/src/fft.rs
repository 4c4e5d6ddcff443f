//! Square 2-D FFTs built from `rustfft` row transforms and transposes.

use std::ops::Range;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub(crate) struct Fft2 {
    size: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("size", &self.size).finish()
    }
}

impl Fft2 {
    pub(crate) fn new(size: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft2 {
            size,
            forward: planner.plan_fft_forward(size),
            inverse: planner.plan_fft_inverse(size),
        }
    }

    /// Forward transform of data whose rows outside `rows` are zero.
    pub(crate) fn forward_rows(&self, data: &mut [Complex64], rows: Range<usize>) {
        self.run(data, &self.forward, rows, 0..self.size);
    }

    /// Inverse transform, normalized so that `inverse(forward(x)) == x`.
    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.inverse_cols(data, 0..self.size);
    }

    /// Inverse transform that is only correct in the columns `cols`.
    pub(crate) fn inverse_cols(&self, data: &mut [Complex64], cols: Range<usize>) {
        self.run(data, &self.inverse, 0..self.size, cols);
        let scale = 1.0 / (self.size * self.size) as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }

    fn run(&self, data: &mut [Complex64], fft: &Arc<dyn Fft<f64>>, first: Range<usize>, second: Range<usize>) {
        let n = self.size;
        assert_eq!(data.len(), n * n);
        let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        fft.process_with_scratch(&mut data[first.start * n..first.end * n], &mut scratch);
        transpose_in_place(data, n);
        fft.process_with_scratch(&mut data[second.start * n..second.end * n], &mut scratch);
        transpose_in_place(data, n);
    }
}

fn transpose_in_place(data: &mut [Complex64], n: usize) {
    const BLOCK: usize = 32;
    for bi in (0..n).step_by(BLOCK) {
        for bj in (bi..n).step_by(BLOCK) {
            for i in bi..(bi + BLOCK).min(n) {
                let start = if bi == bj { i + 1 } else { bj };
                for j in start..(bj + BLOCK).min(n) {
                    data.swap(i * n + j, j * n + i);
                }
            }
        }
    }
}

/// Sample frequencies in cycles per unit length, in FFT order.
pub(crate) fn frequencies(len: usize, spacing: f64) -> Vec<f64> {
    let denom = len as f64 * spacing;
    (0..len)
        .map(|i| {
            let k = if i < len.div_ceil(2) { i as isize } else { i as isize - len as isize };
            k as f64 / denom
        })
        .collect()
}

/// One-dimensional helper used by the line operators.
pub(crate) struct Fft1 {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    len: usize,
}

impl Fft1 {
    pub(crate) fn new(len: usize) -> Self {
        let mut planner = FftPlanner::new();
        Fft1 { forward: planner.plan_fft_forward(len), inverse: planner.plan_fft_inverse(len), len }
    }

    pub(crate) fn forward(&self, data: &mut [Complex64]) {
        self.forward.process(data);
    }

    pub(crate) fn inverse(&self, data: &mut [Complex64]) {
        self.inverse.process(data);
        let scale = 1.0 / self.len as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}
