//! Curve-side measurements on `Gamma = rho(R)` and the explicit maps used
//! as scenarios.

mod cauchy;
pub(crate) mod evaluator;
mod extension;
mod prop2;
mod trace;

pub use cauchy::{curve_cauchy_operator, CurveCauchyReport};
pub use evaluator::{Affine, ClosedForm, Identity, MapEvaluator, Provenance};
pub use extension::{ba_extension, ba_extension_with_factor, beltrami_fd, wirtinger_fd, BaExtension};
pub use prop2::{prop2_map, Prop2Map, Sector};
pub use trace::{
    bilipschitz_profile, chord_arc_constant, regularity_check, trace_curve, BilipschitzProfile, ChordArcReport,
    CurveTrace,
};
