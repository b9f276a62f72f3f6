//! C ABI over `ua-core`.
//!
//! Every entry point returns a [`UaStatus`]. Results come back through out
//! pointers. On failure the message is kept per thread and can be read with
//! [`ua_last_error`]. Strings handed out by the library must be released with
//! [`ua_string_free`], handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ua_core::algebra::builtin;
use ua_core::maltsev::{
    build_core, maltsev_term, reg_maltsev, verify_witness, weakly_maltsev, BundleTheorem, CoreObjects, DominionMode,
    Verdict, WitnessBundle,
};
use ua_core::variety::free_algebra;
use ua_core::{Error, FiniteAlgebra, VarietyPresentation};

/// Status codes returned by every function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UaStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed algebra, term, witness or other input.
    InvalidInput = 3,
    /// A size or enumeration cap was hit.
    CapExceeded = 4,
    /// The congruence-distributive procedure does not apply; use refute mode.
    CdCertificationFailed = 5,
    /// The library panicked. This is a bug.
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UaVerdict {
    Yes = 0,
    No = 1,
    Unknown = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UaMode {
    /// Complete for congruence-distributive varieties.
    Cd = 0,
    /// Search powers up to the given bound; may answer unknown.
    Refute = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UaTheorem {
    WeaklyMaltsev = 0,
    RegMaltsev = 1,
}

/// Opaque handle to a finite algebra.
pub struct UaAlgebra(FiniteAlgebra);

/// Opaque handle to the precomputed free algebras of the variety generated by
/// an algebra. Building one is the expensive step of the Mal'tsev queries.
pub struct UaCore(CoreObjects);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(UaStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::CapExceeded { .. } => UaStatus::CapExceeded,
            Error::CdCertificationFailed => UaStatus::CdCertificationFailed,
            _ => UaStatus::InvalidInput,
        };
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> UaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            UaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            UaStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(UaStatus::NullArgument, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(UaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message for the last failed call on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ua_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ua_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Look up a builtin algebra such as `lattice2`, `n5`, `m3`, `z2xor` or `set2`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_algebra_builtin(name: *const c_char, out: *mut *mut UaAlgebra) -> UaStatus {
    guard(|| {
        let name = str_arg(name, "name")?;
        let a = builtin(name)?;
        put(out, Box::into_raw(Box::new(UaAlgebra(a))), "out")
    })
}

/// Parse an algebra from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_algebra_from_json(json: *const c_char, out: *mut *mut UaAlgebra) -> UaStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let a = FiniteAlgebra::from_json_str(text)?;
        put(out, Box::into_raw(Box::new(UaAlgebra(a))), "out")
    })
}

/// # Safety
/// `alg` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ua_algebra_free(alg: *mut UaAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_algebra_size(alg: *const UaAlgebra, out: *mut usize) -> UaStatus {
    guard(|| {
        let a = handle(alg, "alg")?;
        put(out, a.0.size(), "out")
    })
}

/// JSON form of the algebra. Free the result with `ua_string_free`.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_algebra_to_json(alg: *const UaAlgebra, out: *mut *mut c_char) -> UaStatus {
    guard(|| {
        let a = handle(alg, "alg")?;
        put(out, c_string(a.0.to_json_string()), "out")
    })
}

/// Number of elements of the free algebra on `n` generators in the variety
/// generated by `alg`.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_free_algebra_size(alg: *const UaAlgebra, n: usize, out: *mut usize) -> UaStatus {
    guard(|| {
        let a = handle(alg, "alg")?;
        let f = free_algebra(&VarietyPresentation::new(a.0.clone()), n)?;
        put(out, f.size(), "out")
    })
}

/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_core_new(alg: *const UaAlgebra, out: *mut *mut UaCore) -> UaStatus {
    guard(|| {
        let a = handle(alg, "alg")?;
        let core = build_core(&VarietyPresentation::new(a.0.clone()))?;
        put(out, Box::into_raw(Box::new(UaCore(core))), "out")
    })
}

/// # Safety
/// `core` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ua_core_free(core: *mut UaCore) {
    if !core.is_null() {
        drop(Box::from_raw(core));
    }
}

/// A Mal'tsev term for the variety, rendered with the algebra's operation
/// names, or null in `out` if there is none.
///
/// # Safety
/// `core` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_core_maltsev_term(core: *const UaCore, out: *mut *mut c_char) -> UaStatus {
    guard(|| {
        let c = handle(core, "core")?;
        let sig = c.0.variety.generator().sig();
        let term = maltsev_term(&c.0)?;
        put(out, term.map_or(ptr::null_mut(), |t| c_string(t.render(sig))), "out")
    })
}

/// Decide the weakly Mal'tsev or regularity property. `max_power` is only
/// read in refute mode. If `json_out` is not null it receives the verdict as
/// JSON, including the separation certificate for a negative answer.
///
/// # Safety
/// `core` must be a live handle, `verdict_out` a valid pointer and `json_out`
/// null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_core_decide(
    core: *const UaCore,
    theorem: UaTheorem,
    mode: UaMode,
    max_power: usize,
    verdict_out: *mut UaVerdict,
    json_out: *mut *mut c_char,
) -> UaStatus {
    guard(|| {
        let c = handle(core, "core")?;
        if verdict_out.is_null() {
            return Err(null("verdict_out"));
        }
        let mode = match mode {
            UaMode::Cd => DominionMode::CdComplete,
            UaMode::Refute => DominionMode::Refute { max_power },
        };
        let verdict = match theorem {
            UaTheorem::WeaklyMaltsev => weakly_maltsev(&c.0, mode)?,
            UaTheorem::RegMaltsev => reg_maltsev(&c.0, mode)?,
        };
        let code = match verdict {
            Verdict::Yes(_) => UaVerdict::Yes,
            Verdict::No(_) => UaVerdict::No,
            Verdict::Unknown { .. } => UaVerdict::Unknown,
        };
        if !json_out.is_null() {
            let text = serde_json::to_string(&verdict.to_json()).map_err(Error::from)?;
            json_out.write(c_string(text));
        }
        verdict_out.write(code);
        Ok(())
    })
}

/// Check a witness bundle against the variety generated by `alg`. `witness`
/// is either a builtin bundle name or bundle JSON. `passed_out` receives 1 if
/// every equation holds. If `report_out` is not null it receives the plain
/// text report.
///
/// # Safety
/// `alg` must be a live handle, `witness` a NUL-terminated string,
/// `passed_out` a valid pointer and `report_out` null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ua_verify_witness(
    alg: *const UaAlgebra,
    witness: *const c_char,
    theorem: UaTheorem,
    passed_out: *mut i32,
    report_out: *mut *mut c_char,
) -> UaStatus {
    guard(|| {
        let a = handle(alg, "alg")?;
        let text = str_arg(witness, "witness")?;
        if passed_out.is_null() {
            return Err(null("passed_out"));
        }
        let sig = a.0.sig();
        let bundle = match WitnessBundle::builtin(text, sig) {
            Err(Error::UnknownBuiltin(_)) => WitnessBundle::from_json_str(text, sig)?,
            other => other?,
        };
        let theorem = match theorem {
            UaTheorem::WeaklyMaltsev => BundleTheorem::Wm,
            UaTheorem::RegMaltsev => BundleTheorem::Reg,
        };
        let report = verify_witness(&VarietyPresentation::new(a.0.clone()), &bundle, theorem)?;
        if !report_out.is_null() {
            report_out.write(c_string(report.render_text()));
        }
        passed_out.write(i32::from(report.passed()));
        Ok(())
    })
}
