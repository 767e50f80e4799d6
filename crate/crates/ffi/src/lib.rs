//! C ABI over `discrepancy-core`.
//!
//! Point sets live behind the opaque [`DiscPointSet`] handle. Every fallible
//! call returns a [`DiscStatus`]; on failure the message is available from
//! [`disc_last_error_message`] on the same thread. Exact values come back as
//! `"p/q"` strings owned by the caller and released with
//! [`disc_string_free`], alongside a `double` rendering.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use discrepancy_core::extremal::{
    lambda_star, linf_exact, linf_star_exact, verify, EnumerationBudget, LambdaMode, VerifyOptions,
};
use discrepancy_core::gen::GeneratorSpec;
use discrepancy_core::kernel::{IndexSubset, PointSet, TorusPoint};
use discrepancy_core::lq::{l2_warnock, lq_exact_even};
use discrepancy_core::scalar::{format_rational, parse_rational, render, Rational};
use discrepancy_core::Error;

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    BudgetExceeded = 4,
    DimensionMismatch = 5,
    Io = 6,
    Panic = 7,
}

/// Opaque point-set handle.
pub struct DiscPointSet {
    inner: PointSet,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(DiscStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::BudgetExceeded { .. } => DiscStatus::BudgetExceeded,
            Error::DimensionMismatch { .. } | Error::ZeroDimension => DiscStatus::DimensionMismatch,
            Error::ParseRational(_) | Error::Json(_) => DiscStatus::Parse,
            Error::Io(_) => DiscStatus::Io,
            _ => DiscStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(DiscStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DiscStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DiscStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            DiscStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DiscStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn set_arg<'a>(p: *const DiscPointSet) -> Result<&'a PointSet, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| null("point set"))
}

fn to_c(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s).map(CString::into_raw).map_err(|_| Failure(DiscStatus::InvalidArgument, "interior NUL".into()))
}

unsafe fn put_value(x: &Rational, exact: *mut *mut c_char, approx: *mut f64) -> Result<(), Failure> {
    if exact.is_null() && approx.is_null() {
        return Err(null("output"));
    }
    if !approx.is_null() {
        *approx = render(x);
    }
    if !exact.is_null() {
        *exact = to_c(format_rational(x))?;
    }
    Ok(())
}

unsafe fn put_set(set: PointSet, out: *mut *mut DiscPointSet) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(DiscPointSet { inner: set }));
    Ok(())
}

/// Parses a point set from its JSON form
/// `{"dim": d, "points": [["p/q", ...], ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn disc_pointset_from_json(json: *const c_char, out: *mut *mut DiscPointSet) -> DiscStatus {
    guard(|| {
        let s = str_arg(json, "json")?;
        put_set(PointSet::from_json(s)?, out)
    })
}

/// Builds a point set from `n * dim` row-major numerators and denominators.
///
/// # Safety
/// Both arrays must hold `n * dim` elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn disc_pointset_new(
    dim: usize,
    n: usize,
    numerators: *const i64,
    denominators: *const i64,
    out: *mut *mut DiscPointSet,
) -> DiscStatus {
    guard(|| {
        if numerators.is_null() || denominators.is_null() {
            return Err(null("coordinate array"));
        }
        let len = n.checked_mul(dim).ok_or_else(|| Failure(DiscStatus::InvalidArgument, "size overflow".into()))?;
        let nums = std::slice::from_raw_parts(numerators, len);
        let dens = std::slice::from_raw_parts(denominators, len);
        if dens.contains(&0) {
            return Err(Failure(DiscStatus::InvalidArgument, "zero denominator".into()));
        }
        let points = (0..n)
            .map(|i| TorusPoint::new((0..dim).map(|k| Rational::new(nums[i * dim + k].into(), dens[i * dim + k].into()))))
            .collect();
        put_set(PointSet::new(dim, points, "")?, out)
    })
}

/// Generates a point set from a spec such as `korobov:n=5,a=2,d=2`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn disc_pointset_generate(spec: *const c_char, out: *mut *mut DiscPointSet) -> DiscStatus {
    guard(|| {
        let spec: GeneratorSpec = str_arg(spec, "spec")?.parse()?;
        put_set(spec.generate()?, out)
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `set` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn disc_pointset_free(set: *mut DiscPointSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Number of points; 0 for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn disc_pointset_len(set: *const DiscPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// Dimension; 0 for null.
///
/// # Safety
/// `set` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn disc_pointset_dim(set: *const DiscPointSet) -> usize {
    set.as_ref().map_or(0, |s| s.inner.dim())
}

/// Exact `L_inf`. Either output may be null, not both.
///
/// # Safety
/// `set` must be a live handle; outputs must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn disc_linf(set: *const DiscPointSet, exact: *mut *mut c_char, approx: *mut f64) -> DiscStatus {
    guard(|| {
        let r = linf_exact(set_arg(set)?, &EnumerationBudget::default())?;
        put_value(&r.value, exact, approx)
    })
}

/// Exact `L_inf*`, the supremum over shifts.
///
/// # Safety
/// As for [`disc_linf`].
#[no_mangle]
pub unsafe extern "C" fn disc_linf_star(
    set: *const DiscPointSet,
    exact: *mut *mut c_char,
    approx: *mut f64,
) -> DiscStatus {
    guard(|| {
        let r = linf_star_exact(set_arg(set)?, &EnumerationBudget::default())?;
        put_value(&r.value, exact, approx)
    })
}

/// Exact `sup_Z |lambda_J[D + Z]|`; bit `k` of `mask` selects coordinate `k + 1`.
///
/// # Safety
/// As for [`disc_linf`].
#[no_mangle]
pub unsafe extern "C" fn disc_lambda_star(
    set: *const DiscPointSet,
    mask: u32,
    exact: *mut *mut c_char,
    approx: *mut f64,
) -> DiscStatus {
    guard(|| {
        let d = set_arg(set)?;
        if d.dim() >= 32 || mask >> d.dim() != 0 {
            return Err(Failure(DiscStatus::InvalidArgument, format!("mask {mask:#x} outside d = {}", d.dim())));
        }
        let j = IndexSubset::from_mask(d.dim(), mask);
        let r = lambda_star(d, &j, LambdaMode::Abs, &EnumerationBudget::default())?;
        put_value(&r.value, exact, approx)
    })
}

/// Exact `L_2^2` by the closed form.
///
/// # Safety
/// As for [`disc_linf`].
#[no_mangle]
pub unsafe extern "C" fn disc_l2_squared(
    set: *const DiscPointSet,
    exact: *mut *mut c_char,
    approx: *mut f64,
) -> DiscStatus {
    guard(|| put_value(&l2_warnock(set_arg(set)?), exact, approx))
}

/// Exact `L_q^q` for even `q`.
///
/// # Safety
/// As for [`disc_linf`].
#[no_mangle]
pub unsafe extern "C" fn disc_lq_exact_even(
    set: *const DiscPointSet,
    q: u32,
    exact: *mut *mut c_char,
    approx: *mut f64,
) -> DiscStatus {
    guard(|| {
        let v = lq_exact_even(set_arg(set)?, q, &EnumerationBudget::default())?;
        put_value(&v, exact, approx)
    })
}

/// Verdicts as a JSON array for a comma-separated inequality list (for
/// example `lemma1,lemma3,corollary`) at exponent `q` (`"p/q"`).
///
/// # Safety
/// `set` must be a live handle, strings NUL-terminated, `json_out` writable.
#[no_mangle]
pub unsafe extern "C" fn disc_verify(
    set: *const DiscPointSet,
    inequalities: *const c_char,
    q: *const c_char,
    json_out: *mut *mut c_char,
) -> DiscStatus {
    guard(|| {
        let d = set_arg(set)?;
        let names = str_arg(inequalities, "inequalities")?;
        let q = parse_rational(str_arg(q, "q")?)?;
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        let verdicts = verify(names, d, &q, &VerifyOptions::default())?;
        let body = serde_json::to_string(&verdicts).map_err(Error::from)?;
        *json_out = to_c(body)?;
        Ok(())
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn disc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next call into the library on this thread.
#[no_mangle]
pub extern "C" fn disc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn disc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
