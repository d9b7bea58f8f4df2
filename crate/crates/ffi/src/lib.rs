//! C interface to the workbench.
//!
//! Conventions:
//! - codes are held behind the opaque [`CybCode`] handle, created from the
//!   JSON code-specification format and freed with [`cyb_code_free`];
//! - every report comes back as a heap-allocated JSON C string that the
//!   caller releases with [`cyb_string_free`];
//! - functions return [`CybStatus`]; on anything but `CYB_STATUS_OK` a
//!   human-readable message is retrievable via [`cyb_last_error`];
//! - all entry points are panic-safe.

use std::cell::RefCell;
use std::collections::BTreeSet;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cycbound::bounds::{best_bound, solve_inequality_system, verify_bound_by_abstraction};
use cycbound::codes::{CodeFile, CodeSpec};
use cycbound::distance::exact_distance;
use cycbound::error::Error;
use cycbound::lrc::{classify_optimality, construct, verify_locality, Family, LrcParams};
use cycbound::replay::replay_json;

/// Status codes; aligned with the command-line exit codes where the same
/// failure exists there.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CybStatus {
    Ok = 0,
    /// Malformed input (JSON, token, or parameter string).
    Parse = 2,
    /// Constraint or engine failure.
    Engine = 3,
    /// A witness or a verification claim failed to replay.
    Verify = 4,
    /// A search budget ran out before an answer was established.
    Budget = 5,
    /// Null pointer argument.
    NullPointer = 6,
    /// Internal panic (a bug; the message names the location when known).
    Panic = 7,
}

/// Opaque handle to a constructed code.
pub struct CybCode {
    inner: CodeSpec,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_for(e: &Error) -> CybStatus {
    match e {
        Error::BudgetExhausted => CybStatus::Budget,
        Error::InvalidWitness(_) => CybStatus::Verify,
        Error::InvalidParameter(_) => CybStatus::Parse,
        _ => CybStatus::Engine,
    }
}

fn fail(e: Error) -> CybStatus {
    let s = status_for(&e);
    set_error(e.to_string());
    s
}

fn guard(f: impl FnOnce() -> CybStatus) -> CybStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".into());
            CybStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, CybStatus> {
    if ptr.is_null() {
        set_error("null pointer".into());
        return Err(CybStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("input is not UTF-8".into());
        CybStatus::Parse
    })
}

fn emit_json(value: serde_json::Value, out: *mut *mut c_char) -> CybStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return CybStatus::NullPointer;
    }
    let text = serde_json::to_string(&value).expect("serializable report");
    let c = CString::new(text).expect("JSON has no NUL");
    unsafe { *out = c.into_raw() };
    CybStatus::Ok
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn cyb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Last error message for this thread, as a fresh allocation (free with
/// [`cyb_string_free`]); null when no error has been recorded.
#[no_mangle]
pub extern "C" fn cyb_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Free a string returned by this library.
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library and
/// not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cyb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse a code-specification JSON document
/// (`{"q":..,"n":..,"lambda":"..","defining_set":[..]}`) into a handle.
///
/// # Safety
/// `json` must be a valid NUL-terminated string; `out` must be a valid
/// pointer to a pointer slot.
#[no_mangle]
pub unsafe extern "C" fn cyb_code_parse(json: *const c_char, out: *mut *mut CybCode) -> CybStatus {
    guard(|| {
        if out.is_null() {
            set_error("null output pointer".into());
            return CybStatus::NullPointer;
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let file: CodeFile = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => {
                set_error(format!("bad code file: {e}"));
                return CybStatus::Parse;
            }
        };
        match CodeSpec::from_file(&file) {
            Ok(code) => {
                *out = Box::into_raw(Box::new(CybCode { inner: code }));
                CybStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Free a code handle.
///
/// # Safety
/// `code` must be null or a handle from [`cyb_code_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cyb_code_free(code: *mut CybCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Code length, or -1 on a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyb_code_length(code: *const CybCode) -> i64 {
    if code.is_null() {
        return -1;
    }
    (*code).inner.n as i64
}

/// Code dimension, or -1 on a null handle.
///
/// # Safety
/// `code` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cyb_code_dimension(code: *const CybCode) -> i64 {
    if code.is_null() {
        return -1;
    }
    (*code).inner.k as i64
}

/// Best defining-set bound as a JSON report.
///
/// # Safety
/// `code` must be a live handle; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cyb_best_bound_json(
    code: *const CybCode,
    out: *mut *mut c_char,
) -> CybStatus {
    guard(|| {
        if code.is_null() {
            set_error("null code handle".into());
            return CybStatus::NullPointer;
        }
        let c = &(*code).inner;
        let report = best_bound(c.n, &c.defining_set);
        emit_json(serde_json::to_value(&report).expect("serializable"), out)
    })
}

/// All solution vectors at (s, delta) as a JSON array.
///
/// # Safety
/// `out` must be a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cyb_solve_json(
    s: u32,
    delta: u32,
    cap: u64,
    out: *mut *mut c_char,
) -> CybStatus {
    guard(|| match solve_inequality_system(s, delta, cap) {
        Ok(sols) => emit_json(serde_json::to_value(&sols).expect("serializable"), out),
        Err(e) => fail(e),
    })
}

/// Construct an LRC family member and classify it; the report carries the
/// code file, locality evidence, and classification.
///
/// # Safety
/// `family` must be a valid NUL-terminated string; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cyb_lrc_json(
    q: u64,
    delta: u32,
    rho: u32,
    family: *const c_char,
    exact_budget: u64,
    out: *mut *mut c_char,
) -> CybStatus {
    guard(|| {
        let fam = match read_str(family) {
            Ok("qminus1") => Family::QMinus1,
            Ok("qplus1even") => Family::QPlus1Even,
            Ok("qplus1odd") => Family::QPlus1Odd,
            Ok(other) => {
                set_error(format!("unknown family {other:?}"));
                return CybStatus::Parse;
            }
            Err(s) => return s,
        };
        let params = LrcParams { q, delta, rho, family: fam };
        let cons = match construct(&params) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let locality = match verify_locality(&cons.code, params.r(), delta) {
            Ok(l) => l,
            Err(e) => return fail(e),
        };
        let classification = match classify_optimality(&cons, &locality, exact_budget) {
            Ok(c) => c,
            Err(e) => return fail(e),
        };
        let doc = serde_json::json!({
            "params": params,
            "code": cons.code.to_file(),
            "dimension": cons.code.k,
            "locality": locality,
            "classification": classification,
        });
        emit_json(doc, out)
    })
}

/// Verify a claimed bound over the abstraction set; the report lists one
/// replayable witness per vector.
///
/// # Safety
/// `code` must be a live handle; `out` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cyb_verify_json(
    code: *const CybCode,
    claimed: u32,
    node_budget: u64,
    cap: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> CybStatus {
    guard(|| {
        if code.is_null() {
            set_error("null code handle".into());
            return CybStatus::NullPointer;
        }
        let c = &(*code).inner;
        let s: BTreeSet<u32> = c.defining_set.clone();
        match verify_bound_by_abstraction(c.n, &s, claimed, node_budget, cap, seed) {
            Ok(report) if report.verified => emit_json(serde_json::to_value(&report).expect("serializable"), out),
            Ok(report) => {
                let status = if report.budget_exhausted() {
                    CybStatus::Budget
                } else {
                    CybStatus::Verify
                };
                set_error(format!(
                    "{} of {} abstraction vectors failed",
                    report.failures.len(),
                    report.vector_count
                ));
                status
            }
            Err(e) => fail(e),
        }
    })
}

/// Exact minimum distance by exhaustive enumeration; fails with a budget
/// status when the projective class count exceeds `budget`.
///
/// # Safety
/// `code` must be a live handle; `out_distance` a valid slot.
#[no_mangle]
pub unsafe extern "C" fn cyb_exact_distance(
    code: *const CybCode,
    budget: u64,
    out_distance: *mut u32,
) -> CybStatus {
    guard(|| {
        if code.is_null() || out_distance.is_null() {
            set_error("null pointer".into());
            return CybStatus::NullPointer;
        }
        match exact_distance(&(*code).inner, budget) {
            Ok(res) => {
                *out_distance = res.exact.expect("exhaustive result");
                CybStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Replay any witness document produced by this library or its tools.
///
/// # Safety
/// `json` must be a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cyb_replay_json(json: *const c_char) -> CybStatus {
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match replay_json(text) {
            Ok(_) => CybStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn version_is_static() {
        let v = unsafe { CStr::from_ptr(cyb_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut out: *mut CybCode = std::ptr::null_mut();
            assert_eq!(cyb_code_parse(std::ptr::null(), &mut out), CybStatus::NullPointer);
            assert_eq!(cyb_code_length(std::ptr::null()), -1);
            let err = cyb_last_error();
            assert!(!err.is_null());
            cyb_string_free(err);
        }
    }
}
