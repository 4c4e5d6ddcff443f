use num_complex::Complex64;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Solver,
    ClosedForm,
    Extension,
}

/// A planar map `z -> rho(z)`.
pub trait MapEvaluator {
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        zs.iter().map(|&z| self.eval(z)).collect()
    }

    fn provenance(&self) -> Provenance;

    /// Free-form domain-of-validity note.
    fn notes(&self) -> String {
        String::new()
    }
}

pub(crate) fn finite(z: Complex64, w: Complex64) -> Result<Complex64> {
    if w.re.is_finite() && w.im.is_finite() {
        Ok(w)
    } else {
        Err(Error::Evaluator(z))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Identity;

impl MapEvaluator for Identity {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(z)
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }
}

/// `z -> a z + b`.
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub a: Complex64,
    pub b: Complex64,
}

impl MapEvaluator for Affine {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.a * z + self.b)
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }
}

/// Any closure as a closed-form map.
pub struct ClosedForm<F> {
    f: F,
    notes: String,
}

impl<F: Fn(Complex64) -> Complex64> ClosedForm<F> {
    pub fn new(f: F, notes: impl Into<String>) -> Self {
        ClosedForm { f, notes: notes.into() }
    }
}

impl<F: Fn(Complex64) -> Complex64> MapEvaluator for ClosedForm<F> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        finite(z, (self.f)(z))
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }

    fn notes(&self) -> String {
        self.notes.clone()
    }
}

impl<M: MapEvaluator + ?Sized> MapEvaluator for &M {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }

    fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        (**self).eval_many(zs)
    }

    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }

    fn notes(&self) -> String {
        (**self).notes()
    }
}

impl<M: MapEvaluator + ?Sized> MapEvaluator for Box<M> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        (**self).eval(z)
    }

    fn eval_many(&self, zs: &[Complex64]) -> Result<Vec<Complex64>> {
        (**self).eval_many(zs)
    }

    fn provenance(&self) -> Provenance {
        (**self).provenance()
    }

    fn notes(&self) -> String {
        (**self).notes()
    }
}
