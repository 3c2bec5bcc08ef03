//! C interface to `canmod`: opaque curve handles, JSON analyses, and
//! integer status codes matching the command-line exit codes.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

use canmod::analysis::{analyze, AnalyzeOptions};
use canmod::curve::CurveModel;
use canmod::dsl::parse_curve;
use canmod::report::{analysis_json, render};
use canmod::{Error, Settings};

/// Success.
pub const CANMOD_OK: i32 = 0;
/// An equivalence or property was violated.
pub const CANMOD_VIOLATION: i32 = 1;
/// The curve text did not parse.
pub const CANMOD_PARSE_ERROR: i32 = 2;
/// The curve data is invalid.
pub const CANMOD_VALIDATION_ERROR: i32 = 3;
/// Truncation or stabilization failed.
pub const CANMOD_NUMERIC_ERROR: i32 = 4;
/// A required pointer argument was null.
pub const CANMOD_NULL_ARGUMENT: i32 = -1;

/// A validated curve.
pub struct CanmodCurve {
    curve: CurveModel,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn fail(e: &Error) -> i32 {
    set_error(&e.to_string());
    e.class().exit_code()
}

fn null_arg(name: &str) -> i32 {
    set_error(&format!("null argument: {name}"));
    CANMOD_NULL_ARGUMENT
}

/// Parses `.curve` text into a new handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canmod_curve_parse(text: *const c_char, out: *mut *mut CanmodCurve) -> i32 {
    if text.is_null() {
        return null_arg("text");
    }
    if out.is_null() {
        return null_arg("out");
    }
    *out = ptr::null_mut();
    let Ok(text) = CStr::from_ptr(text).to_str() else {
        set_error("curve text is not UTF-8");
        return CANMOD_PARSE_ERROR;
    };
    match parse_curve(text) {
        Ok(curve) => {
            *out = Box::into_raw(Box::new(CanmodCurve { curve }));
            CANMOD_OK
        }
        Err(e) => fail(&e),
    }
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `curve` must come from `canmod_curve_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn canmod_curve_free(curve: *mut CanmodCurve) {
    if !curve.is_null() {
        drop(Box::from_raw(curve));
    }
}

/// Arithmetic genus of the curve.
///
/// # Safety
/// `curve` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canmod_curve_genus(curve: *const CanmodCurve, out: *mut usize) -> i32 {
    if curve.is_null() {
        return null_arg("curve");
    }
    if out.is_null() {
        return null_arg("out");
    }
    *out = (*curve).curve.genus();
    CANMOD_OK
}

/// Full analysis as JSON in `*out_json`, to be released with
/// `canmod_string_free`. A violated equivalence still yields the report
/// and returns `CANMOD_VIOLATION`.
///
/// # Safety
/// `curve` must be a live handle and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn canmod_analyze_json(
    curve: *const CanmodCurve,
    truncation_scale: i64,
    out_json: *mut *mut c_char,
) -> i32 {
    if curve.is_null() {
        return null_arg("curve");
    }
    if out_json.is_null() {
        return null_arg("out_json");
    }
    *out_json = ptr::null_mut();
    if truncation_scale < 1 {
        return fail(&Error::BadRange(format!("truncation scale must be at least 1, got {truncation_scale}")));
    }
    let c = &(*curve).curve;
    let settings = Settings::with_scale(truncation_scale);
    let a = match analyze(c, &settings, &AnalyzeOptions::default()) {
        Ok(a) => a,
        Err(e) => return fail(&e),
    };
    let text = render(&analysis_json("curve", c, &a, &settings));
    *out_json = CString::new(text).unwrap_or_default().into_raw();
    match a.enforce() {
        Ok(()) => CANMOD_OK,
        Err(e) => fail(&e),
    }
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn canmod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, valid until the next call.
#[no_mangle]
pub extern "C" fn canmod_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
