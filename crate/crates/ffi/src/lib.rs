//! C interface. Modules are opaque handles owned by the caller and released
//! with `hv_module_free`; strings returned through out-parameters are
//! released with `hv_string_free`. Every entry point returns an `HvStatus`;
//! on failure `hv_last_error` describes the cause on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hyperverma::analysis::{self, AnalysisError};
use hyperverma::rep::{verify_relations, ModuleRep};
use hyperverma::verma;
use hyperverma::weights::{ChiForm, ChiKind, Setting, Weight};

/// Verma dimensions above this are refused.
pub const HV_MAX_DIM: usize = 729;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    TheoremViolation = 3,
    GuardExceeded = 4,
    Internal = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HvChi {
    Zero = 0,
    Nilpotent = 1,
    Semisimple = 2,
}

/// A module over the higher reduced enveloping algebra.
pub struct HvModule {
    rep: ModuleRep,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(HvStatus, String);

impl From<AnalysisError> for Failure {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::TheoremViolation(m) => Failure(HvStatus::TheoremViolation, m),
            other => Failure(HvStatus::InvalidArgument, other.to_string()),
        }
    }
}

fn invalid(e: impl ToString) -> Failure {
    Failure(HvStatus::InvalidArgument, e.to_string())
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guarded(f: impl FnOnce() -> Result<(), Failure>) -> HvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            HvStatus::Internal
        }
    }
}

fn setting(p: u32, r: u32, chi: HvChi, c: i64) -> Result<Setting, Failure> {
    let n = (p as u64).checked_pow(r + 1).unwrap_or(u64::MAX);
    if n > HV_MAX_DIM as u64 {
        return Err(Failure(HvStatus::GuardExceeded, format!("p^(r+1) = {n} exceeds {HV_MAX_DIM}")));
    }
    let kind = match chi {
        HvChi::Zero => ChiKind::Zero,
        HvChi::Nilpotent => ChiKind::Nilpotent,
        HvChi::Semisimple => ChiKind::Semisimple,
    };
    let chi = ChiForm::standard(kind, p, Some(c)).map_err(invalid)?;
    Setting::new(p, r as usize, chi).map_err(invalid)
}

unsafe fn weight(s: &Setting, lambda: *const c_char) -> Result<Weight, Failure> {
    if lambda.is_null() {
        return Err(Failure(HvStatus::NullPointer, "lambda is null".into()));
    }
    let text = CStr::from_ptr(lambda).to_str().map_err(invalid)?;
    Weight::parse(s, text).map_err(invalid)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(HvStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a>(m: *const HvModule) -> Result<&'a HvModule, Failure> {
    m.as_ref().ok_or_else(|| Failure(HvStatus::NullPointer, "module is null".into()))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON has no nul bytes").into_raw()
}

/// Builds the baby Verma module. `lambda` is `"λ_0,…,λ_r"`; for a
/// semisimple character the last entry `j` selects the root `θ + j`.
///
/// # Safety
/// `lambda` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_verma_new(
    p: u32,
    r: u32,
    chi: HvChi,
    c: i64,
    lambda: *const c_char,
    out: *mut *mut HvModule,
) -> HvStatus {
    guarded(|| {
        let s = setting(p, r, chi, c)?;
        let w = weight(&s, lambda)?;
        let rep = verma::baby_verma(&s, &w).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(HvModule { rep })))
    })
}

/// Builds the irreducible quotient of the baby Verma module.
///
/// # Safety
/// As for `hv_verma_new`.
#[no_mangle]
pub unsafe extern "C" fn hv_quotient_new(
    p: u32,
    r: u32,
    chi: HvChi,
    c: i64,
    lambda: *const c_char,
    out: *mut *mut HvModule,
) -> HvStatus {
    guarded(|| {
        let s = setting(p, r, chi, c)?;
        let w = weight(&s, lambda)?;
        let rep = analysis::irreducible_quotient(&s, &w)?;
        write_out(out, Box::into_raw(Box::new(HvModule { rep })))
    })
}

/// # Safety
/// `module` must come from this library and not be freed twice; null is
/// accepted.
#[no_mangle]
pub unsafe extern "C" fn hv_module_free(module: *mut HvModule) {
    if !module.is_null() {
        drop(Box::from_raw(module));
    }
}

/// # Safety
/// `module` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_module_dim(module: *const HvModule, out: *mut usize) -> HvStatus {
    guarded(|| write_out(out, handle(module)?.rep.dim()))
}

/// Module matrices as JSON; release the string with `hv_string_free`.
///
/// # Safety
/// `module` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_module_to_json(module: *const HvModule, out: *mut *mut c_char) -> HvStatus {
    guarded(|| {
        let text = handle(module)?.rep.to_json().to_string();
        write_out(out, into_c_string(text))
    })
}

/// Checks every defining relation; `TheoremViolation` names the first one
/// that fails.
///
/// # Safety
/// `module` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn hv_module_verify(module: *const HvModule) -> HvStatus {
    guarded(|| {
        let report = verify_relations(&handle(module)?.rep);
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Failure(HvStatus::TheoremViolation, v.clone())),
        }
    })
}

/// Isomorphism classes of irreducibles as JSON.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hv_classify_json(p: u32, r: u32, chi: HvChi, c: i64, out: *mut *mut c_char) -> HvStatus {
    guarded(|| {
        let s = setting(p, r, chi, c)?;
        let table = analysis::classify(&s)?;
        write_out(out, into_c_string(table.to_json().to_string()))
    })
}

/// # Safety
/// `s` must come from this library; null is accepted.
#[no_mangle]
pub unsafe extern "C" fn hv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failed call on this thread, empty after success.
/// Valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn hv_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
