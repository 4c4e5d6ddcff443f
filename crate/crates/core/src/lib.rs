//! Numerical toolkit for quasiconformal maps of the plane and the quasicircles
//! they produce.
//!
//! The crate discretizes the complex plane on a staggered square grid
//! ([`field`]), realizes the Beurling and Cauchy singular integrals as Fourier
//! multipliers ([`transforms`]), solves the Beltrami equation with a Neumann
//! series for `(I - mu S)` ([`beltrami`]), and measures the quantities that
//! relate the dilatation to the geometry of the image of the real line:
//! Carleson norms of `|mu|^2 / |y|` ([`analysis`]) and chord-arc, regularity and
//! curve Cauchy-operator constants ([`geometry`]). The [`cli`] module wires these
//! into reproducible scenario reports.

pub mod analysis;
pub mod beltrami;
pub mod cli;
mod error;
mod fft;
pub mod field;
pub mod geometry;
pub mod quadrature;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
