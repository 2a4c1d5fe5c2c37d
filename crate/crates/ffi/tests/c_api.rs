use std::ffi::{CStr, CString};
use std::ptr;

use hyperverma_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(hv_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn module_lifecycle() {
    let lambda = CString::new("1,0").unwrap();
    let mut m: *mut HvModule = ptr::null_mut();
    unsafe {
        assert_eq!(hv_quotient_new(3, 1, HvChi::Nilpotent, 1, lambda.as_ptr(), &mut m), HvStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(hv_module_dim(m, &mut dim), HvStatus::Ok);
        assert_eq!(dim, 6);
        assert_eq!(hv_module_verify(m), HvStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(hv_module_to_json(m, &mut json), HvStatus::Ok);
        let text = CStr::from_ptr(json).to_str().unwrap().to_owned();
        assert!(text.contains("\"dim\":6"));
        hv_string_free(json);
        hv_module_free(m);
    }
}

#[test]
fn classification_json() {
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(hv_classify_json(3, 1, HvChi::Semisimple, 1, &mut out), HvStatus::Ok);
        let v = CStr::from_ptr(out).to_str().unwrap().to_owned();
        hv_string_free(out);
        assert_eq!(v.matches("\"members\"").count(), 9);
    }
}

#[test]
fn error_codes() {
    let bad = CString::new("5,0").unwrap();
    let mut m: *mut HvModule = ptr::null_mut();
    unsafe {
        assert_eq!(hv_verma_new(3, 1, HvChi::Zero, 0, bad.as_ptr(), &mut m), HvStatus::InvalidArgument);
        assert!(!last_error().is_empty());
        assert_eq!(hv_verma_new(3, 1, HvChi::Zero, 0, ptr::null(), &mut m), HvStatus::NullPointer);
        assert_eq!(hv_verma_new(4, 0, HvChi::Zero, 0, bad.as_ptr(), &mut m), HvStatus::InvalidArgument);
        let ok = CString::new("0").unwrap();
        assert_eq!(hv_verma_new(3, 6, HvChi::Zero, 0, ok.as_ptr(), &mut m), HvStatus::GuardExceeded);
        assert_eq!(hv_verma_new(3, 0, HvChi::Zero, 0, ok.as_ptr(), ptr::null_mut()), HvStatus::NullPointer);
        let mut dim = 0usize;
        assert_eq!(hv_module_dim(ptr::null(), &mut dim), HvStatus::NullPointer);
        assert_eq!(hv_verma_new(3, 0, HvChi::Zero, 0, ok.as_ptr(), &mut m), HvStatus::Ok);
        assert_eq!(last_error(), "");
        hv_module_free(m);
        hv_module_free(ptr::null_mut());
        hv_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hyperverma.h")).unwrap();
    for name in [
        "hv_verma_new",
        "hv_quotient_new",
        "hv_module_free",
        "hv_module_dim",
        "hv_module_to_json",
        "hv_module_verify",
        "hv_classify_json",
        "hv_string_free",
        "hv_last_error",
        "HV_STATUS_THEOREM_VIOLATION",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
