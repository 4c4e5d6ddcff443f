use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::evaluator::finite;
use super::extension::wirtinger_fd;
use super::{MapEvaluator, Provenance};
use crate::beltrami::BeltramiCoefficient;
use crate::field::{ComplexField, Grid};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// `|arg z| < pi/4`
    Right,
    /// `|arg z - pi| < pi/4`
    Left,
    Upper,
    Lower,
}

impl Sector {
    pub fn of(z: Complex64) -> Sector {
        let t = z.arg();
        if t.abs() < FRAC_PI_4 {
            Sector::Right
        } else if t.abs() > PI - FRAC_PI_4 {
            Sector::Left
        } else if t > 0.0 {
            Sector::Upper
        } else {
            Sector::Lower
        }
    }

    pub fn is_conformal(self) -> bool {
        matches!(self, Sector::Right | Sector::Left)
    }
}

/// `rho = z^{1/K}` on the right sector, `-(-z)^{1/K}` on the left one, and
/// `|z|^{1/K} e^{i A(arg z)}` in between with `A` linear, odd, and matching
/// the arguments on the sector boundaries. On the real axis it reduces to
/// `sign(x) |x|^{1/K}`.
#[derive(Debug, Clone, Copy)]
pub struct Prop2Map {
    k: f64,
}

impl Prop2Map {
    pub fn new(k: f64) -> Result<Self> {
        if !(k > 1.0 && k < 2.0) {
            return Err(Error::OutOfRange(format!("K must lie in (1, 2), got {k}")));
        }
        Ok(Prop2Map { k })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    fn arg_upper(&self, t: f64) -> f64 {
        PI / (4.0 * self.k) + (t - FRAC_PI_4) * (2.0 - 1.0 / self.k)
    }

    /// The formula of `sector`, continued analytically past its edges.
    pub fn eval_in(&self, sector: Sector, z: Complex64) -> Complex64 {
        let a = 1.0 / self.k;
        match sector {
            Sector::Right => z.powf(a),
            Sector::Left => {
                let w = -z;
                -Complex64::from_polar(w.norm().powf(a), w.arg() * a)
            }
            Sector::Upper => Complex64::from_polar(z.norm().powf(a), self.arg_upper(z.arg())),
            Sector::Lower => Complex64::from_polar(z.norm().powf(a), -self.arg_upper(-z.arg())),
        }
    }

    /// `|mu|` on the two sectors where the map is not conformal.
    pub fn dilatation_modulus(&self) -> f64 {
        1.0 - 1.0 / self.k
    }

    /// `mu` at `z` from fourth-order differences of the formula of the
    /// sector containing `z`.
    pub fn mu_fd(&self, z: Complex64, relative_step: f64) -> Result<Complex64> {
        if z.norm() == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let sector = Sector::of(z);
        let local = SectorFormula { map: *self, sector };
        let (d, dbar) = wirtinger_fd(&local, z, relative_step * z.norm())?;
        Ok(dbar / d)
    }

    pub fn boundary(&self, x: f64) -> f64 {
        x.signum() * x.abs().powf(1.0 / self.k)
    }
}

struct SectorFormula {
    map: Prop2Map,
    sector: Sector,
}

impl MapEvaluator for SectorFormula {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.map.eval_in(self.sector, z))
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }
}

impl MapEvaluator for Prop2Map {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Ok(Complex64::new(self.boundary(z.re), 0.0));
        }
        finite(z, self.eval_in(Sector::of(z), z))
    }

    fn provenance(&self) -> Provenance {
        Provenance::ClosedForm
    }

    fn notes(&self) -> String {
        format!("K = {}; not bilipschitz at the origin", self.k)
    }
}

/// The map and its dilatation sampled on `grid` (truncated to the box).
pub fn prop2_map(k: f64, grid: &Grid) -> Result<(Prop2Map, BeltramiCoefficient)> {
    let map = Prop2Map::new(k)?;
    let mut values = Vec::with_capacity(grid.len());
    for (_, z) in grid.points() {
        values.push(map.mu_fd(z, 1e-3)?);
    }
    let mu = BeltramiCoefficient::new(ComplexField::from_values(*grid, values)?)?;
    Ok((map, mu))
}
