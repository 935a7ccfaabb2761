//! C interface to the `orderk` library.
//!
//! Point sets and results are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns an
//! [`OrderkStatus`] code; the message of the last failure on the calling
//! thread is available from [`orderk_last_error`]. Strings returned through
//! out-parameters are released with [`orderk_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use orderk::cli::{filtration_json, mosaic_json, parse_points};
use orderk::geom::{Point, PointSet, Rational};
use orderk::orderk::{compute_up_to_order, OrderKResult};
use orderk::radius::{alpha_complex, compute_radius_function, filtration, Extended};
use orderk::tiling::build_tiling;
use orderk::Error;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderkStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Unparsable input, bad UTF-8 or an invalid argument.
    InvalidInput = 2,
    /// The input is not in general position.
    Degenerate = 3,
    /// An order or index outside its valid range.
    OutOfRange = 4,
    /// Any other library error.
    Failed = 5,
    /// A panic was caught at the boundary.
    Panic = 6,
}

/// Opaque set of points with exact rational coordinates.
pub struct OrderkPoints {
    inner: PointSet,
}

/// Opaque family of mosaics of orders `1..=K`.
pub struct OrderkResult {
    inner: OrderKResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> OrderkStatus {
    match e {
        Error::Degenerate { .. } | Error::AffinelyDependent | Error::VerticalDegenerate => OrderkStatus::Degenerate,
        Error::OutOfRange { .. } => OrderkStatus::OutOfRange,
        Error::Parse { .. } | Error::DuplicatePoint { .. } | Error::DimensionMismatch { .. } | Error::InvalidSpec(_) => {
            OrderkStatus::InvalidInput
        }
        _ => OrderkStatus::Failed,
    }
}

/// Runs `f`, recording any error or panic for [`orderk_last_error`].
fn guard(f: impl FnOnce() -> Result<(), (OrderkStatus, String)>) -> OrderkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OrderkStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OrderkStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (OrderkStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (OrderkStatus, String) {
    (OrderkStatus::NullArgument, format!("{what} is null"))
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (OrderkStatus, String)> {
    let c = CString::new(s).map_err(|_| (OrderkStatus::Failed, "output contains a nul byte".to_owned()))?;
    // SAFETY: the caller checked `out` for null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message of the last failed call on this thread; empty if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn orderk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses points from text: one point per line, whitespace-separated
/// decimals or `p/q` rationals.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orderk_points_parse(text: *const c_char, out: *mut *mut OrderkPoints) -> OrderkStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(text)
            .to_str()
            .map_err(|_| (OrderkStatus::InvalidInput, "text is not UTF-8".to_owned()))?;
        let inner = parse_points(s).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(OrderkPoints { inner }));
        Ok(())
    })
}

/// Builds `n` points in `R^d` from row-major numerators and denominators;
/// coordinate `j` of point `i` is `num[i*d + j] / den[i*d + j]`.
///
/// # Safety
/// `num` and `den` must each hold `n * d` values; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn orderk_points_from_ratios(
    num: *const i64,
    den: *const i64,
    n: usize,
    d: usize,
    out: *mut *mut OrderkPoints,
) -> OrderkStatus {
    guard(|| {
        if num.is_null() || den.is_null() {
            return Err(null("coordinate array"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let len = n
            .checked_mul(d)
            .ok_or_else(|| (OrderkStatus::InvalidInput, "n * d overflows".to_owned()))?;
        let num = std::slice::from_raw_parts(num, len);
        let den = std::slice::from_raw_parts(den, len);
        if den.contains(&0) {
            return Err((OrderkStatus::InvalidInput, "zero denominator".to_owned()));
        }
        let points = (0..n)
            .map(|i| {
                Point::new(
                    (0..d)
                        .map(|j| Rational::new(BigInt::from(num[i * d + j]), BigInt::from(den[i * d + j])))
                        .collect(),
                )
            })
            .collect();
        let inner = PointSet::new(points).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(OrderkPoints { inner }));
        Ok(())
    })
}

/// # Safety
/// `points` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orderk_points_free(points: *mut OrderkPoints) {
    if !points.is_null() {
        drop(Box::from_raw(points));
    }
}

/// Number of points; 0 for a null handle.
///
/// # Safety
/// `points` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orderk_points_len(points: *const OrderkPoints) -> usize {
    points.as_ref().map_or(0, |p| p.inner.len())
}

/// Ambient dimension; 0 for a null handle.
///
/// # Safety
/// `points` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orderk_points_dim(points: *const OrderkPoints) -> usize {
    points.as_ref().map_or(0, |p| p.inner.dim())
}

/// Computes the mosaics of orders `1..=max_order`.
///
/// # Safety
/// `points` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orderk_compute(
    points: *const OrderkPoints,
    max_order: usize,
    out: *mut *mut OrderkResult,
) -> OrderkStatus {
    guard(|| {
        let points = points.as_ref().ok_or_else(|| null("points"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = compute_up_to_order(&points.inner, max_order).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(OrderkResult { inner }));
        Ok(())
    })
}

/// # Safety
/// `result` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn orderk_result_free(result: *mut OrderkResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// Highest computed order; 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn orderk_result_max_order(result: *const OrderkResult) -> usize {
    result.as_ref().map_or(0, |r| r.inner.mosaics.len())
}

/// Vertex and d-cell counts of the order-`k` mosaic.
///
/// # Safety
/// `result` must be a live handle; `vertices` and `cells` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn orderk_result_counts(
    result: *const OrderkResult,
    k: usize,
    vertices: *mut usize,
    cells: *mut usize,
) -> OrderkStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        if vertices.is_null() || cells.is_null() {
            return Err(null("count pointer"));
        }
        let m = r.inner.mosaic(k).ok_or_else(|| range(k, r.inner.mosaics.len()))?;
        *vertices = m.vertices.len();
        *cells = m.cells.len();
        Ok(())
    })
}

fn range(k: usize, max: usize) -> (OrderkStatus, String) {
    lib_err(Error::OutOfRange {
        what: "order",
        value: k as i64,
        min: 1,
        max: max as i64,
    })
}

/// The order-`k` mosaic as JSON `{order, vertices, cells}`.
///
/// # Safety
/// `result` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orderk_result_mosaic_json(
    result: *const OrderkResult,
    k: usize,
    out: *mut *mut c_char,
) -> OrderkStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let m = r.inner.mosaic(k).ok_or_else(|| range(k, r.inner.mosaics.len()))?;
        out_string(mosaic_json(m), out)
    })
}

/// The radius filtration of order `k` as JSON, cut at `alpha_sq` (a number,
/// `p/q` or `inf`) unless it is null. `k` is at most the computed maximum
/// order.
///
/// # Safety
/// `result` must be a live handle, `alpha_sq` null or a nul-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn orderk_result_alpha_json(
    result: *const OrderkResult,
    k: usize,
    alpha_sq: *const c_char,
    out: *mut *mut c_char,
) -> OrderkStatus {
    guard(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let threshold: Option<Extended> = if alpha_sq.is_null() {
            None
        } else {
            let s = CStr::from_ptr(alpha_sq)
                .to_str()
                .map_err(|_| (OrderkStatus::InvalidInput, "threshold is not UTF-8".to_owned()))?;
            Some(s.parse().map_err(|_| (OrderkStatus::InvalidInput, format!("not a squared radius: {s:?}")))?)
        };
        let limit = r.inner.mosaics.len();
        let tiling = build_tiling(&r.inner.rhomboids, limit);
        let radii = compute_radius_function(&tiling, &r.inner.points).map_err(lib_err)?;
        let entries = match &threshold {
            Some(t) => alpha_complex(k, t, &tiling, &radii).map_err(lib_err)?.cells,
            None => filtration(k, &tiling, &radii).map_err(lib_err)?,
        };
        out_string(filtration_json(k, threshold.as_ref(), &entries), out)
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not freed before.
#[no_mangle]
pub unsafe extern "C" fn orderk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
