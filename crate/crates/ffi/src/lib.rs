//! C interface to `quasicircle`.
//!
//! Objects cross the boundary as opaque handles. Each constructor writes a
//! fresh handle through its `out` pointer and the caller releases it with the
//! matching `_free` function. Every function returns a [`QcStatus`]; after a
//! failure [`qc_last_error`] describes it for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quasicircle::analysis::{carleson_density, carleson_norm, CarlesonGeometry};
use quasicircle::beltrami::{solve_beltrami, weighted_operator_norm, BeltramiCoefficient};
use quasicircle::field::{ComplexField, Grid};
use quasicircle::geometry::{chord_arc_constant, curve_cauchy_operator, trace_curve, CurveTrace, Identity, MapEvaluator, Prop2Map};
use quasicircle::transforms::SpectralPlan;
use quasicircle::{Complex64, Error};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QcStatus {
    Ok = 0,
    NullPointer = 1,
    /// Bad grid, coefficient, parameter or buffer size.
    InvalidArgument = 2,
    /// An iteration hit its limit; any estimate written is the last iterate.
    NotConverged = 3,
    /// Degenerate curve, non-monotone boundary map or non-finite evaluation.
    Degenerate = 4,
    Io = 5,
    /// A Rust panic was caught at the boundary.
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcComplex {
    pub re: f64,
    pub im: f64,
}

impl From<QcComplex> for Complex64 {
    fn from(z: QcComplex) -> Self {
        Complex64::new(z.re, z.im)
    }
}

impl From<Complex64> for QcComplex {
    fn from(z: Complex64) -> Self {
        QcComplex { re: z.re, im: z.im }
    }
}

/// Staggered square grid.
pub struct QcGrid(Grid);

/// Beltrami coefficient on a grid.
pub struct QcBeltrami(BeltramiCoefficient);

/// A map of the plane that can be evaluated pointwise.
pub struct QcMap(Box<dyn MapEvaluator>);

/// Samples of the image of a real interval under a map.
pub struct QcTrace(CurveTrace);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

enum Fail {
    Null(&'static str),
    Status(QcStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::NotConverged { .. } => QcStatus::NotConverged,
            Error::TooCloseToLine(_) | Error::Degenerate(_) | Error::NonMonotone(_) | Error::Evaluator(_) => {
                QcStatus::Degenerate
            }
            Error::Io(_) | Error::Json(_) => QcStatus::Io,
            _ => QcStatus::InvalidArgument,
        };
        Fail::Status(status, e.to_string())
    }
}

fn record(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> QcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QcStatus::Ok,
        Ok(Err(Fail::Null(name))) => {
            record(format!("{name} is null"));
            QcStatus::NullPointer
        }
        Ok(Err(Fail::Status(status, message))) => {
            record(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            record(format!("panic: {msg}"));
            QcStatus::Panic
        }
    }
}

unsafe fn get<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn slot<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

/// Nulls the handle slot up front so a failed call never leaves garbage.
unsafe fn handle_slot<'a, T>(p: *mut *mut T) -> Result<&'a mut *mut T, Fail> {
    let s = slot(p, "out")?;
    *s = ptr::null_mut();
    Ok(s)
}

fn not_converged(what: &str, iterations: usize) -> Fail {
    Fail::Status(QcStatus::NotConverged, format!("{what} did not converge after {iterations} iterations"))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qc_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn qc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Grid on `[-half_width, half_width]^2` with `n` cells per side.
///
/// # Safety
/// `out` must be null or point to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn qc_grid_new(half_width: f64, n: usize, out: *mut *mut QcGrid) -> QcStatus {
    guard(|| {
        let out = handle_slot(out)?;
        *out = Box::into_raw(Box::new(QcGrid(Grid::new(half_width, n)?)));
        Ok(())
    })
}

/// # Safety
/// `grid` must be null or a live grid handle.
#[no_mangle]
pub unsafe extern "C" fn qc_grid_n(grid: *const QcGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `grid` must be null or a live grid handle.
#[no_mangle]
pub unsafe extern "C" fn qc_grid_half_width(grid: *const QcGrid) -> f64 {
    grid.as_ref().map_or(f64::NAN, |g| g.0.half_width())
}

/// # Safety
/// `grid` must be null or a handle from `qc_grid_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_grid_free(grid: *mut QcGrid) {
    free(grid)
}

/// `c` times a mollified indicator of the ball `|z - center| < radius`.
///
/// # Safety
/// `grid` must be a live grid handle; `out` must point to handle storage.
#[no_mangle]
pub unsafe extern "C" fn qc_beltrami_ball(
    grid: *const QcGrid,
    c: QcComplex,
    center: QcComplex,
    radius: f64,
    mollify_width: f64,
    out: *mut *mut QcBeltrami,
) -> QcStatus {
    guard(|| {
        let out = handle_slot(out)?;
        let grid = get(grid, "grid")?;
        let mu = BeltramiCoefficient::ball(&grid.0, c.into(), center.into(), radius, mollify_width)?;
        *out = Box::into_raw(Box::new(QcBeltrami(mu)));
        Ok(())
    })
}

/// Coefficient from `n * n` samples in row-major order (index `k * n + j`,
/// `k` counting rows from the bottom).
///
/// # Safety
/// `values` must point to `len` readable elements.
#[no_mangle]
pub unsafe extern "C" fn qc_beltrami_from_values(
    grid: *const QcGrid,
    values: *const QcComplex,
    len: usize,
    out: *mut *mut QcBeltrami,
) -> QcStatus {
    guard(|| {
        let out = handle_slot(out)?;
        let grid = get(grid, "grid")?;
        if values.is_null() {
            return Err(Fail::Null("values"));
        }
        let samples = std::slice::from_raw_parts(values, len).iter().map(|&v| v.into()).collect();
        let mu = BeltramiCoefficient::new(ComplexField::from_values(grid.0, samples)?)?;
        *out = Box::into_raw(Box::new(QcBeltrami(mu)));
        Ok(())
    })
}

/// # Safety
/// `mu` must be a live coefficient handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_beltrami_sup(mu: *const QcBeltrami, out: *mut f64) -> QcStatus {
    guard(|| {
        *slot(out, "out")? = get(mu, "mu")?.0.sup_bound();
        Ok(())
    })
}

/// # Safety
/// `mu` must be null or a coefficient handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_beltrami_free(mu: *mut QcBeltrami) {
    free(mu)
}

/// Carleson norm of `|mu|^2 / |y| dA` over balls centred on the real axis.
///
/// # Safety
/// `mu` must be a live coefficient handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_carleson_norm(mu: *const QcBeltrami, out: *mut f64) -> QcStatus {
    guard(|| {
        let out = slot(out, "out")?;
        *out = carleson_norm(&carleson_density(&get(mu, "mu")?.0), CarlesonGeometry::Line)?.norm;
        Ok(())
    })
}

/// Power-iteration estimate of `||mu S||` on `L^2(dA / |y|)`.
///
/// # Safety
/// `mu` must be a live coefficient handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_weighted_operator_norm(
    mu: *const QcBeltrami,
    padding_factor: usize,
    tol: f64,
    max_iter: usize,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let out = slot(out, "out")?;
        let mu = &get(mu, "mu")?.0;
        let plan = SpectralPlan::new(*mu.grid(), padding_factor)?;
        let stats = weighted_operator_norm(&plan, mu, tol, max_iter)?;
        *out = stats.weighted_norm_estimate.unwrap_or(f64::NAN);
        if !stats.converged {
            return Err(not_converged("power iteration", stats.iteration_count));
        }
        Ok(())
    })
}

/// Normalized solution `z + O(1/z)` of the Beltrami equation.
///
/// # Safety
/// `mu` must be a live coefficient handle; `out` must point to handle storage.
#[no_mangle]
pub unsafe extern "C" fn qc_solve_beltrami(
    mu: *const QcBeltrami,
    padding_factor: usize,
    tol: f64,
    max_iter: usize,
    out: *mut *mut QcMap,
) -> QcStatus {
    guard(|| {
        let out = handle_slot(out)?;
        let mu = &get(mu, "mu")?.0;
        let plan = SpectralPlan::new(*mu.grid(), padding_factor)?;
        let map = solve_beltrami(&plan, mu, tol, max_iter)?;
        *out = Box::into_raw(Box::new(QcMap(Box::new(map))));
        Ok(())
    })
}

/// # Safety
/// `out` must point to handle storage.
#[no_mangle]
pub unsafe extern "C" fn qc_map_identity(out: *mut *mut QcMap) -> QcStatus {
    guard(|| {
        *handle_slot(out)? = Box::into_raw(Box::new(QcMap(Box::new(Identity))));
        Ok(())
    })
}

/// Piecewise power map with `|f(z)| = |z|^(1/K)`, `1 < K < 2`.
///
/// # Safety
/// `out` must point to handle storage.
#[no_mangle]
pub unsafe extern "C" fn qc_map_sector(k: f64, out: *mut *mut QcMap) -> QcStatus {
    guard(|| {
        let out = handle_slot(out)?;
        *out = Box::into_raw(Box::new(QcMap(Box::new(Prop2Map::new(k)?))));
        Ok(())
    })
}

/// # Safety
/// `map` must be a live map handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_map_eval(map: *const QcMap, z: QcComplex, out: *mut QcComplex) -> QcStatus {
    guard(|| {
        let out = slot(out, "out")?;
        *out = get(map, "map")?.0.eval(z.into())?.into();
        Ok(())
    })
}

/// # Safety
/// `map` must be null or a map handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_map_free(map: *mut QcMap) {
    free(map)
}

/// Image of `samples` equispaced points of `[-half_window, half_window]`.
///
/// # Safety
/// `map` must be a live map handle; `out` must point to handle storage.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_new(
    map: *const QcMap,
    half_window: f64,
    samples: usize,
    out: *mut *mut QcTrace,
) -> QcStatus {
    guard(|| {
        let out = handle_slot(out)?;
        let trace = trace_curve(get(map, "map")?.0.as_ref(), half_window, samples)?;
        *out = Box::into_raw(Box::new(QcTrace(trace)));
        Ok(())
    })
}

/// # Safety
/// `trace` must be null or a live trace handle.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_len(trace: *const QcTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.len())
}

/// Copies the trace points into `buf`, which must hold `qc_trace_len` entries.
///
/// # Safety
/// `buf` must point to `cap` writable elements.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_points(trace: *const QcTrace, buf: *mut QcComplex, cap: usize) -> QcStatus {
    guard(|| {
        let pts = get(trace, "trace")?.0.points();
        if buf.is_null() {
            return Err(Fail::Null("buf"));
        }
        if cap < pts.len() {
            return Err(Fail::Status(
                QcStatus::InvalidArgument,
                format!("buffer holds {cap} points, trace has {}", pts.len()),
            ));
        }
        let dst = std::slice::from_raw_parts_mut(buf, pts.len());
        for (d, &p) in dst.iter_mut().zip(pts) {
            *d = p.into();
        }
        Ok(())
    })
}

/// # Safety
/// `trace` must be a live trace handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_chord_arc(trace: *const QcTrace, out: *mut f64) -> QcStatus {
    guard(|| {
        let out = slot(out, "out")?;
        *out = chord_arc_constant(&get(trace, "trace")?.0)?.constant;
        Ok(())
    })
}

/// Norm of the discretized Cauchy integral on the trace.
///
/// # Safety
/// `trace` must be a live trace handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_cauchy_norm(
    trace: *const QcTrace,
    tol: f64,
    max_iter: usize,
    out: *mut f64,
) -> QcStatus {
    guard(|| {
        let out = slot(out, "out")?;
        let report = curve_cauchy_operator(&get(trace, "trace")?.0, tol, max_iter)?;
        *out = report.norm;
        if !report.converged {
            return Err(not_converged("power iteration", report.iterations));
        }
        Ok(())
    })
}

/// # Safety
/// `trace` must be null or a trace handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qc_trace_free(trace: *mut QcTrace) {
    free(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(qc_last_error()) }.to_string_lossy().into_owned()
    }

    #[test]
    fn errors_map_to_status_codes() {
        let cases = [
            (Error::NotConverged { iterations: 3, residual: 1.0 }, QcStatus::NotConverged),
            (Error::Degenerate("x".into()), QcStatus::Degenerate),
            (Error::NonMonotone(4), QcStatus::Degenerate),
            (Error::OutOfRange("x".into()), QcStatus::InvalidArgument),
            (Error::SupportViolation, QcStatus::InvalidArgument),
        ];
        for (e, want) in cases {
            let msg = e.to_string();
            assert_eq!(guard(|| Err(e.into())), want);
            assert_eq!(last_error(), msg);
        }
    }

    #[test]
    fn panics_stop_at_the_boundary() {
        let hook = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let status = guard(|| panic!("boom"));
        std::panic::set_hook(hook);
        assert_eq!(status, QcStatus::Panic);
        assert_eq!(last_error(), "panic: boom");
    }

    #[test]
    fn version_is_the_crate_version() {
        let v = unsafe { CStr::from_ptr(qc_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
