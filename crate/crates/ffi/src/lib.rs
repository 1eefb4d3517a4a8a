//! C ABI over the `umbral-stats` engine.
//!
//! Series and statistics cross the boundary as opaque heap handles that the
//! caller releases with the matching `*_free` function. Rationals travel as
//! `"p/q"` strings and structured results as JSON strings; every string
//! returned through an out-pointer must be released with [`us_string_free`].
//!
//! Every fallible function returns a [`UsStatus`]. On failure the message
//! is kept per thread and can be read with [`us_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use umbral_stats::catalog;
use umbral_stats::deformed_entropy::{main_theorem_check, map_g_inverse, phi_entropy};
use umbral_stats::rational::{format_rational, parse_rational};
use umbral_stats::statistics::Statistics;
use umbral_stats::verify::{self, Suite};
use umbral_stats::{Error, Rational, TruncatedSeries};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UsStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument was outside its documented range.
    InvalidArgument = 3,
    /// A mathematical precondition failed (constant term, order, ...).
    Domain = 4,
    /// Unknown catalog entry.
    UnknownEntry = 5,
    /// A rational or JSON string could not be parsed.
    Parse = 6,
    /// A check ran and reported failure.
    CheckFailed = 7,
    /// The engine panicked; this is a bug.
    Panic = 99,
}

/// Truncated power series with exact rational coefficients.
pub struct UsSeries {
    inner: TruncatedSeries,
}

/// Normalized statistics built from a free energy.
pub struct UsStatistics {
    inner: Statistics,
}

struct Failure {
    status: UsStatus,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::UnknownEntry { .. } => UsStatus::UnknownEntry,
            Error::Parse(_) => UsStatus::Parse,
            Error::InvalidParam(_) => UsStatus::InvalidArgument,
            _ => UsStatus::Domain,
        };
        Failure {
            status,
            message: e.to_string(),
        }
    }
}

fn fail(status: UsStatus, message: impl Into<String>) -> Failure {
    Failure {
        status,
        message: message.into(),
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `f`, records any failure and converts panics into [`UsStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> UsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => UsStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(&failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            UsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(UsStatus::NullPointer, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(UsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn ref_arg<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(UsStatus::NullPointer, format!("{what} is NULL")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(UsStatus::NullPointer, format!("{what} is NULL")));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| fail(UsStatus::Domain, "string contains NUL"))?;
    write_out(out, c.into_raw(), "out")
}

unsafe fn write_series(out: *mut *mut UsSeries, s: TruncatedSeries) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(UsStatus::NullPointer, "out is NULL"));
    }
    out.write(Box::into_raw(Box::new(UsSeries { inner: s })));
    Ok(())
}

unsafe fn write_statistics(out: *mut *mut UsStatistics, s: Statistics) -> Result<(), Failure> {
    if out.is_null() {
        return Err(fail(UsStatus::NullPointer, "out is NULL"));
    }
    out.write(Box::into_raw(Box::new(UsStatistics { inner: s })));
    Ok(())
}

fn json_error(e: serde_json::Error) -> Failure {
    fail(UsStatus::Domain, e.to_string())
}

/// Message of the last failure on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn us_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn us_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn us_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a series of order `n - 1` from `n` coefficient strings
/// (`"p/q"`, integers or finite decimals).
///
/// # Safety
/// `coeffs` must point to `n` valid C strings.
#[no_mangle]
pub unsafe extern "C" fn us_series_new(
    coeffs: *const *const c_char,
    n: usize,
    out: *mut *mut UsSeries,
) -> UsStatus {
    guard(|| {
        if n == 0 {
            return Err(fail(UsStatus::InvalidArgument, "a series needs at least one coefficient"));
        }
        if coeffs.is_null() {
            return Err(fail(UsStatus::NullPointer, "coeffs is NULL"));
        }
        let parsed = (0..n)
            .map(|k| {
                let s = str_arg(*coeffs.add(k), "coefficient")?;
                parse_rational(s).map_err(Failure::from)
            })
            .collect::<Result<Vec<Rational>, Failure>>()?;
        write_series(out, TruncatedSeries::from_coeffs(parsed))
    })
}

/// Parses `{"order": N, "coeffs": ["p/q", ...]}`.
///
/// # Safety
/// `json` must be a valid C string.
#[no_mangle]
pub unsafe extern "C" fn us_series_from_json(json: *const c_char, out: *mut *mut UsSeries) -> UsStatus {
    guard(|| {
        let s = str_arg(json, "json")?;
        let series: TruncatedSeries =
            serde_json::from_str(s).map_err(|e| fail(UsStatus::Parse, e.to_string()))?;
        write_series(out, series)
    })
}

/// Releases a series. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn us_series_free(s: *mut UsSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Truncation order, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn us_series_order(s: *const UsSeries) -> usize {
    s.as_ref().map_or(0, |s| s.inner.order())
}

/// Coefficient of `X^k` as a `"p/q"` string.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_series_coeff(s: *const UsSeries, k: usize, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let s = ref_arg(s, "series")?;
        let c = s.inner.coeff(k).ok_or_else(|| {
            Failure::from(Error::OrderExceeded {
                requested: k,
                order: s.inner.order(),
            })
        })?;
        write_string(out, format_rational(c))
    })
}

/// `{"order": N, "coeffs": [...]}`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_series_to_json(s: *const UsSeries, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let s = ref_arg(s, "series")?;
        write_string(out, serde_json::to_string(&s.inner).map_err(json_error)?)
    })
}

/// Binary series operations.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UsBinaryOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    Div = 3,
    /// `a(b(X))`; requires `b(0) = 0`.
    Compose = 4,
}

/// `a op b`, truncated to the smaller order.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_series_binary(
    op: UsBinaryOp,
    a: *const UsSeries,
    b: *const UsSeries,
    out: *mut *mut UsSeries,
) -> UsStatus {
    guard(|| {
        let (a, b) = (&ref_arg(a, "a")?.inner, &ref_arg(b, "b")?.inner);
        let r = match op {
            UsBinaryOp::Add => a.add(b),
            UsBinaryOp::Sub => a.sub(b),
            UsBinaryOp::Mul => a.mul(b),
            UsBinaryOp::Div => a.div(b)?,
            UsBinaryOp::Compose => a.compose(b)?,
        };
        write_series(out, r)
    })
}

/// Unary series operations.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UsUnaryOp {
    /// Requires `s(0) = 0`.
    Exp = 0,
    /// Requires `s(0) = 1`.
    Log = 1,
    /// Requires `s(0) != 0`.
    Reciprocal = 2,
    /// Compositional inverse; requires `s(0) = 0`, `s'(0) != 0`.
    Invert = 3,
    Derivative = 4,
    Integrate = 5,
}

/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_series_unary(op: UsUnaryOp, s: *const UsSeries, out: *mut *mut UsSeries) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "series")?.inner;
        let r = match op {
            UsUnaryOp::Exp => s.exp()?,
            UsUnaryOp::Log => s.log()?,
            UsUnaryOp::Reciprocal => s.reciprocal()?,
            UsUnaryOp::Invert => s.lagrange_invert()?,
            UsUnaryOp::Derivative => s.derivative(),
            UsUnaryOp::Integrate => s.integrate(),
        };
        write_series(out, r)
    })
}

/// `s^r` for `s(0) = 1` and a rational exponent string.
///
/// # Safety
/// `s` must be a live handle, `r` a C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_series_pow(s: *const UsSeries, r: *const c_char, out: *mut *mut UsSeries) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "series")?.inner;
        let r = parse_rational(str_arg(r, "exponent")?)?;
        write_series(out, s.pow_rational(&r)?)
    })
}

/// Catalog entry `name` at `order`. `params` is NULL or `"k=v,k=v"`.
///
/// # Safety
/// `name` must be a C string, `params` NULL or a C string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_from_catalog(
    name: *const c_char,
    params: *const c_char,
    order: usize,
    out: *mut *mut UsStatistics,
) -> UsStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let params = if params.is_null() {
            Vec::new()
        } else {
            parse_params(str_arg(params, "params")?)?
        };
        if order == 0 {
            return Err(fail(UsStatus::InvalidArgument, "order must be at least 1"));
        }
        let stat = catalog::get(name, &params)?.build(order)?;
        write_statistics(out, stat)
    })
}

fn parse_params(s: &str) -> Result<Vec<(String, Rational)>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| fail(UsStatus::Parse, format!("expected key=value, got `{p}`")))?;
            Ok((k.trim().to_string(), parse_rational(v)?))
        })
        .collect()
}

/// Statistics with weight function `w` (`w(0) = 0`, `w'(0) = 1`).
///
/// # Safety
/// `w` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_from_weight(w: *const UsSeries, out: *mut *mut UsStatistics) -> UsStatus {
    guard(|| {
        let w = &ref_arg(w, "w")?.inner;
        write_statistics(out, Statistics::from_weight("custom", w.clone())?)
    })
}

/// Releases a statistics handle. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_free(s: *mut UsStatistics) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Series attached to a statistics.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UsQuantity {
    /// Free energy `F = log z`.
    FreeEnergy = 0,
    /// Partition function `z`.
    PartitionFunction = 1,
    /// Weight `w = X F'(X)`.
    Weight = 2,
    /// Inverse weight `X(w)`.
    XOfW = 3,
    /// Deformation `φ(u) = X(u)/X'(u)`.
    Phi = 4,
}

/// A fresh copy of one of the statistics' series.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_series(
    s: *const UsStatistics,
    which: UsQuantity,
    out: *mut *mut UsSeries,
) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "statistics")?.inner;
        let r = match which {
            UsQuantity::FreeEnergy => s.free_energy().clone(),
            UsQuantity::PartitionFunction => s.partition_function().clone(),
            UsQuantity::Weight => s.weight().clone(),
            UsQuantity::XOfW => s.x_of_w().clone(),
            UsQuantity::Phi => map_g_inverse(s)?.series(),
        };
        write_series(out, r)
    })
}

/// The dual statistics (weight `X(w)`).
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_dual(s: *const UsStatistics, out: *mut *mut UsStatistics) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "statistics")?.inner;
        write_statistics(out, s.dual()?)
    })
}

/// `H(X) = F - w log X` as `{"plain": ..., "log": ...}`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_entropy_json(s: *const UsStatistics, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "statistics")?.inner;
        write_string(out, serde_json::to_string(&s.entropy()).map_err(json_error)?)
    })
}

/// Normalized φ-entropy `H⁰_φ(p)` of the statistics' deformation, as
/// `{"plain": ..., "log": ...}`.
///
/// # Safety
/// `s` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn us_statistics_phi_entropy_json(s: *const UsStatistics, out: *mut *mut c_char) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "statistics")?.inner;
        let h0 = phi_entropy(&map_g_inverse(s)?)?;
        write_string(out, serde_json::to_string(&h0).map_err(json_error)?)
    })
}

/// Checks `H(X) = H⁰_φ(w(X))` up to the span of `w`. `holds` receives 1 or 0.
///
/// # Safety
/// `s` must be a live handle and `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn us_main_theorem_check(s: *const UsStatistics, holds: *mut c_int) -> UsStatus {
    guard(|| {
        let s = &ref_arg(s, "statistics")?.inner;
        let report = main_theorem_check(s, None)?;
        write_out(holds, c_int::from(report.holds()), "holds")
    })
}

/// Runs a verification suite (`"all"`, `"duality"`, ...). Writes the JSON
/// report to `report` (may be NULL) and returns [`UsStatus::CheckFailed`]
/// if any property failed.
///
/// # Safety
/// `suite` must be a C string; `report` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn us_verify(
    suite: *const c_char,
    order: usize,
    seed: u64,
    report: *mut *mut c_char,
) -> UsStatus {
    guard(|| {
        let suite: Suite = str_arg(suite, "suite")?.parse()?;
        let r = verify::run(suite, order, seed);
        if !report.is_null() {
            write_string(report, serde_json::to_string(&r).map_err(json_error)?)?;
        }
        if !r.passed() {
            let first = r.failures().next().map(|f| format!("{} on {}", f.property, f.subject));
            return Err(fail(
                UsStatus::CheckFailed,
                format!("{} of {} checks failed; first: {}", r.failed, r.checked, first.unwrap_or_default()),
            ));
        }
        Ok(())
    })
}
