//! C interface. Runs are described and reported in JSON; curves are opaque handles.
//!
//! Every function returns a [`MustafinStatus`]. On failure the message is kept per thread
//! and can be read with [`mustafin_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use mustafin::cli::{dispatch, Report, RunConfig};
use mustafin::geometry::{star_like_experiment, PlaneCurve};
use mustafin::{CoeffField, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MustafinStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInput = 3,
    Parse = 4,
    Computation = 5,
    Panic = 6,
}

/// Result of a run, with its JSON text.
pub struct MustafinReport {
    report: Report,
    json: CString,
}

/// A plane curve over a prime field.
pub struct MustafinCurve {
    curve: PlaneCurve,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn fail(status: MustafinStatus, msg: &str) -> MustafinStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> MustafinStatus {
    match e {
        Error::Parse(_) => MustafinStatus::Parse,
        Error::InvalidInput(_) | Error::UnknownVariable(_) | Error::FieldMismatch => MustafinStatus::InvalidInput,
        _ => MustafinStatus::Computation,
    }
}

fn guarded(f: impl FnOnce() -> MustafinStatus) -> MustafinStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(MustafinStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, MustafinStatus> {
    if p.is_null() {
        return Err(fail(MustafinStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(MustafinStatus::InvalidUtf8, "argument is not valid UTF-8"))
}

/// Message of the last failure on this thread; empty if none. Valid until the next call.
#[no_mangle]
pub extern "C" fn mustafin_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mustafin_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Validates and runs a JSON run configuration. On success `*out` owns a report that must
/// be released with [`mustafin_report_free`].
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mustafin_run_json(config_json: *const c_char, out: *mut *mut MustafinReport) -> MustafinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MustafinStatus::NullPointer, "null output pointer");
        }
        *out = std::ptr::null_mut();
        let text = match read_str(config_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let run = RunConfig::from_json(text).and_then(|cfg| dispatch(&cfg));
        let report = match run {
            Ok(r) => r,
            Err(e) => return fail(status_of(&e), &e.to_string()),
        };
        let json = match report.to_json() {
            Ok(j) => CString::new(j).unwrap_or_default(),
            Err(e) => return fail(status_of(&e), &e.to_string()),
        };
        *out = Box::into_raw(Box::new(MustafinReport { report, json }));
        MustafinStatus::Ok
    })
}

/// Overall verdict of a report.
///
/// # Safety
/// `report` must come from [`mustafin_run_json`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mustafin_report_verdict(report: *const MustafinReport, out: *mut bool) -> MustafinStatus {
    if report.is_null() || out.is_null() {
        return fail(MustafinStatus::NullPointer, "null argument");
    }
    *out = (*report).report.verdict;
    MustafinStatus::Ok
}

/// JSON text of a report, owned by the report.
///
/// # Safety
/// `report` must come from [`mustafin_run_json`] and not be freed.
#[no_mangle]
pub unsafe extern "C" fn mustafin_report_json(report: *const MustafinReport) -> *const c_char {
    if report.is_null() {
        set_error("null report");
        return std::ptr::null();
    }
    (*report).json.as_ptr()
}

/// # Safety
/// `report` must come from [`mustafin_run_json`] or be null.
#[no_mangle]
pub unsafe extern "C" fn mustafin_report_free(report: *mut MustafinReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Parses a curve in `u1, u2, u3` (and `t`) over `GF(prime)`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn mustafin_curve_parse(prime: u32, text: *const c_char, out: *mut *mut MustafinCurve) -> MustafinStatus {
    guarded(|| {
        if out.is_null() {
            return fail(MustafinStatus::NullPointer, "null output pointer");
        }
        *out = std::ptr::null_mut();
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let curve = CoeffField::checked_prime(prime as u64).and_then(|f| PlaneCurve::parse(f, text));
        match curve {
            Ok(curve) => {
                *out = Box::into_raw(Box::new(MustafinCurve { curve }));
                MustafinStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Degree of a curve.
///
/// # Safety
/// `curve` must come from [`mustafin_curve_parse`]; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mustafin_curve_degree(curve: *const MustafinCurve, out: *mut u32) -> MustafinStatus {
    if curve.is_null() || out.is_null() {
        return fail(MustafinStatus::NullPointer, "null argument");
    }
    *out = (*curve).curve.degree();
    MustafinStatus::Ok
}

/// Number of star-like trials among `trials` seeded random configurations of `n_plus_1`
/// lattices.
///
/// # Safety
/// `curve` must come from [`mustafin_curve_parse`]; `successes` must be valid.
#[no_mangle]
pub unsafe extern "C" fn mustafin_curve_star_like(
    curve: *const MustafinCurve,
    n_plus_1: usize,
    trials: usize,
    seed: u64,
    successes: *mut usize,
) -> MustafinStatus {
    guarded(|| {
        if curve.is_null() || successes.is_null() {
            return fail(MustafinStatus::NullPointer, "null argument");
        }
        match star_like_experiment(&(*curve).curve, n_plus_1, trials, seed) {
            Ok(s) => {
                *successes = s.successes;
                MustafinStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// # Safety
/// `curve` must come from [`mustafin_curve_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn mustafin_curve_free(curve: *mut MustafinCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}
