//! C interface to the minibmc model checker.
//!
//! A session collects sources and options; `minibmc_verify` turns it into a
//! result handle. Every handle is opaque and freed by its own function.
//! Strings returned by the library are either borrowed from a handle (valid
//! until that handle is freed) or owned by the caller and released with
//! `minibmc_string_free`, as documented per function.

#![allow(clippy::missing_safety_doc)]

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use minibmc::frontend::types::PlatformConfig;
use minibmc::frontend::PreprocessOptions;
use minibmc::goto::link::link;
use minibmc::instrument::CheckOptions;
use minibmc::pipeline::{compile_unit, prepare, verify, VerifyError};
use minibmc::results::{report, Status, VerificationResult};
use minibmc::symex::{SymexError, SymexOptions, UnwindMode};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinibmcError {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    /// The sources do not parse, type check or link.
    Frontend = 4,
    /// A loop has no bound and does not stop on its own.
    Unbounded = 5,
    IndexOutOfRange = 6,
    Internal = 7,
    /// A panic was caught at the boundary.
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinibmcVerdict {
    Successful = 0,
    Failed = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinibmcStatus {
    Success = 0,
    Failure = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinibmcCheck {
    BoundsCheck = 0,
    SignedOverflowCheck = 1,
    UnsignedOverflowCheck = 2,
    DivByZeroCheck = 3,
    UndefinedShiftCheck = 4,
    ConversionCheck = 5,
}

/// Sources and options of one verification run.
pub struct MinibmcSession {
    sources: Vec<(String, String)>,
    entry: String,
    platform: PlatformConfig,
    checks: CheckOptions,
    symex: SymexOptions,
    last_error: Option<CString>,
}

/// Outcome of `minibmc_verify`.
pub struct MinibmcResult {
    result: VerificationResult,
    ids: Vec<CString>,
}

fn guard(f: impl FnOnce() -> MinibmcError) -> MinibmcError {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or(MinibmcError::Panic)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, MinibmcError> {
    if p.is_null() {
        return Err(MinibmcError::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| MinibmcError::InvalidUtf8)
}

impl MinibmcSession {
    fn fail(&mut self, code: MinibmcError, message: impl Into<String>) -> MinibmcError {
        let m = message.into().replace('\0', " ");
        self.last_error = CString::new(m).ok();
        code
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn minibmc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A new session with entry point `main`, 64-bit `long`, no checks and no
/// unwinding bound.
#[no_mangle]
pub extern "C" fn minibmc_session_new() -> *mut MinibmcSession {
    Box::into_raw(Box::new(MinibmcSession {
        sources: Vec::new(),
        entry: "main".to_string(),
        platform: PlatformConfig::default(),
        checks: CheckOptions::default(),
        symex: SymexOptions::default(),
        last_error: None,
    }))
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_session_free(session: *mut MinibmcSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Message of the last failed call on the session, or NULL. Borrowed from
/// the session.
#[no_mangle]
pub unsafe extern "C" fn minibmc_session_last_error(session: *const MinibmcSession) -> *const c_char {
    match session.as_ref().and_then(|s| s.last_error.as_ref()) {
        Some(m) => m.as_ptr(),
        None => ptr::null(),
    }
}

/// Adds a translation unit; `name` is used in locations.
#[no_mangle]
pub unsafe extern "C" fn minibmc_session_add_source(
    session: *mut MinibmcSession,
    name: *const c_char,
    source: *const c_char,
) -> MinibmcError {
    guard(|| {
        let Some(s) = session.as_mut() else {
            return MinibmcError::NullPointer;
        };
        match (text(name), text(source)) {
            (Ok(n), Ok(t)) => {
                s.sources.push((n.to_string(), t.to_string()));
                MinibmcError::Ok
            }
            (Err(e), _) | (_, Err(e)) => s.fail(e, "source name or text is not a valid string"),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_session_set_entry(
    session: *mut MinibmcSession,
    function: *const c_char,
) -> MinibmcError {
    guard(|| {
        let Some(s) = session.as_mut() else {
            return MinibmcError::NullPointer;
        };
        match text(function) {
            Ok(f) if !f.is_empty() => {
                s.entry = f.to_string();
                MinibmcError::Ok
            }
            Ok(_) => s.fail(MinibmcError::InvalidArgument, "empty entry point name"),
            Err(e) => s.fail(e, "entry point name is not a valid string"),
        }
    })
}

/// Bound for every loop; 0 removes the bound.
#[no_mangle]
pub unsafe extern "C" fn minibmc_session_set_unwind(session: *mut MinibmcSession, bound: u32) -> MinibmcError {
    let Some(s) = session.as_mut() else {
        return MinibmcError::NullPointer;
    };
    s.symex.policy.global_bound = (bound > 0).then_some(bound);
    MinibmcError::Ok
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_session_set_unwinding_assertions(
    session: *mut MinibmcSession,
    enabled: bool,
) -> MinibmcError {
    let Some(s) = session.as_mut() else {
        return MinibmcError::NullPointer;
    };
    s.symex.policy.mode = if enabled {
        UnwindMode::Assertions
    } else {
        UnwindMode::Assumptions
    };
    MinibmcError::Ok
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_session_set_check(
    session: *mut MinibmcSession,
    check: MinibmcCheck,
    enabled: bool,
) -> MinibmcError {
    let Some(s) = session.as_mut() else {
        return MinibmcError::NullPointer;
    };
    let flag = match check {
        MinibmcCheck::BoundsCheck => &mut s.checks.bounds_check,
        MinibmcCheck::SignedOverflowCheck => &mut s.checks.signed_overflow_check,
        MinibmcCheck::UnsignedOverflowCheck => &mut s.checks.unsigned_overflow_check,
        MinibmcCheck::DivByZeroCheck => &mut s.checks.div_by_zero_check,
        MinibmcCheck::UndefinedShiftCheck => &mut s.checks.undefined_shift_check,
        MinibmcCheck::ConversionCheck => &mut s.checks.conversion_check,
    };
    *flag = enabled;
    MinibmcError::Ok
}

/// Width of `int` in bits: 16, 32 or 64.
#[no_mangle]
pub unsafe extern "C" fn minibmc_session_set_int_width(session: *mut MinibmcSession, width: u32) -> MinibmcError {
    let Some(s) = session.as_mut() else {
        return MinibmcError::NullPointer;
    };
    if !matches!(width, 16 | 32 | 64) {
        return s.fail(MinibmcError::InvalidArgument, format!("unsupported int width {width}"));
    }
    s.platform.set_int_width(width);
    MinibmcError::Ok
}

/// Compiles, links and checks the session's sources. On success `*out`
/// receives a result handle to be released with `minibmc_result_free`.
#[no_mangle]
pub unsafe extern "C" fn minibmc_verify(session: *mut MinibmcSession, out: *mut *mut MinibmcResult) -> MinibmcError {
    guard(|| {
        let Some(s) = session.as_mut() else {
            return MinibmcError::NullPointer;
        };
        if out.is_null() {
            return MinibmcError::NullPointer;
        }
        *out = ptr::null_mut();
        if s.sources.is_empty() {
            return s.fail(MinibmcError::InvalidArgument, "no sources");
        }
        let mut units = Vec::new();
        for (name, text) in &s.sources {
            match compile_unit(name, text, &PreprocessOptions::default(), &s.platform) {
                Ok(m) => units.push(m),
                Err(e) => {
                    let m = e.to_string();
                    return s.fail(MinibmcError::Frontend, m);
                }
            }
        }
        let model = match link(units)
            .map_err(|e| e.to_string())
            .and_then(|m| prepare(m, &s.checks, &s.entry, &s.platform).map_err(|e| e.to_string()))
        {
            Ok(m) => m,
            Err(m) => return s.fail(MinibmcError::Frontend, m),
        };
        let v = match verify(&model, &s.symex) {
            Ok(v) => v,
            Err(VerifyError::Symex(e @ SymexError::Unbounded { .. })) => {
                return s.fail(MinibmcError::Unbounded, e.to_string());
            }
            Err(e) => return s.fail(MinibmcError::Internal, e.to_string()),
        };
        let ids = v
            .result
            .results
            .iter()
            .map(|r| CString::new(r.property.id.clone()).unwrap_or_default())
            .collect();
        *out = Box::into_raw(Box::new(MinibmcResult { result: v.result, ids }));
        MinibmcError::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_result_free(result: *mut MinibmcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_result_verdict(
    result: *const MinibmcResult,
    verdict: *mut MinibmcVerdict,
) -> MinibmcError {
    let (Some(r), false) = (result.as_ref(), verdict.is_null()) else {
        return MinibmcError::NullPointer;
    };
    *verdict = if r.result.successful() {
        MinibmcVerdict::Successful
    } else {
        MinibmcVerdict::Failed
    };
    MinibmcError::Ok
}

/// Number of properties; 0 for a NULL handle.
#[no_mangle]
pub unsafe extern "C" fn minibmc_result_property_count(result: *const MinibmcResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.results.len())
}

/// Id of property `index`, borrowed from the result; NULL when out of range.
#[no_mangle]
pub unsafe extern "C" fn minibmc_result_property_id(result: *const MinibmcResult, index: usize) -> *const c_char {
    match result.as_ref().and_then(|r| r.ids.get(index)) {
        Some(id) => id.as_ptr(),
        None => ptr::null(),
    }
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_result_property_status(
    result: *const MinibmcResult,
    index: usize,
    status: *mut MinibmcStatus,
) -> MinibmcError {
    let (Some(r), false) = (result.as_ref(), status.is_null()) else {
        return MinibmcError::NullPointer;
    };
    let Some(p) = r.result.results.get(index) else {
        return MinibmcError::IndexOutOfRange;
    };
    *status = match p.status {
        Status::Success => MinibmcStatus::Success,
        Status::Failure => MinibmcStatus::Failure,
    };
    MinibmcError::Ok
}

/// Number of solver calls made while deciding the properties.
#[no_mangle]
pub unsafe extern "C" fn minibmc_result_iterations(result: *const MinibmcResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.iterations)
}

/// The textual report, with traces when `traces` is set. Owned by the
/// caller; release with `minibmc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn minibmc_result_report(result: *const MinibmcResult, traces: bool) -> *mut c_char {
    let Some(r) = result.as_ref() else {
        return ptr::null_mut();
    };
    let text = report::plain(&r.result, traces).replace('\0', " ");
    CString::new(text).map_or(ptr::null_mut(), CString::into_raw)
}

/// The report as a JSON document; release with `minibmc_string_free`.
#[no_mangle]
pub unsafe extern "C" fn minibmc_result_json(result: *const MinibmcResult) -> *mut c_char {
    let Some(r) = result.as_ref() else {
        return ptr::null_mut();
    };
    CString::new(report::json(&r.result).to_string()).map_or(ptr::null_mut(), CString::into_raw)
}

#[no_mangle]
pub unsafe extern "C" fn minibmc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
