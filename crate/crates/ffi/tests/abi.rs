use std::ffi::{CStr, CString};
use std::ptr;

use dualsteenrod_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { ds_string_free(s) };
    out
}

fn last_error() -> String {
    let p = ds_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn zeta_round_trips_through_json() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ds_zeta_json(4, 2, &mut s) }, DsStatus::Ok);
    let text = take(s);
    let p = dualsteenrod::polycore::json::poly_from_json(&text).unwrap();
    assert_eq!(p.to_string(), "xi1^15 + xi1^12 xi2 + xi1^9 xi2^2 + xi1^3 xi2^4 + xi2^5");
    assert!(ds_last_error().is_null());
}

#[test]
fn quotient_handle() {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { ds_quotient_new(2, 2, &mut q) }, DsStatus::Ok);
    let (mut dim, mut top, mut d18) = (0u64, 0i64, 0u64);
    unsafe {
        assert_eq!(ds_quotient_total_dim(q, &mut dim), DsStatus::Ok);
        assert_eq!(ds_quotient_top_degree(q, &mut top), DsStatus::Ok);
        assert_eq!(ds_quotient_dim(q, 18, &mut d18), DsStatus::Ok);
    }
    assert_eq!((dim, top, d18), (35, 18, 1));

    let poly = CString::new("xi1^16").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ds_quotient_normal_form_json(q, poly.as_ptr(), &mut s) }, DsStatus::Ok);
    assert!(take(s).contains("\"terms\":[]"));

    let bad = CString::new("xi7").unwrap();
    assert_eq!(
        unsafe { ds_quotient_normal_form_json(q, bad.as_ptr(), &mut s) },
        DsStatus::InvalidArgument
    );
    assert!(!last_error().is_empty());

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ds_quotient_frobenius_json(q, &mut s) }, DsStatus::Ok);
    assert!(take(s).contains("\"all_nonsingular\":true"));
    unsafe { ds_quotient_free(q) };
}

#[test]
fn errors_are_classified() {
    let mut q = ptr::null_mut();
    assert_eq!(unsafe { ds_quotient_new(0, 1, &mut q) }, DsStatus::InvalidArgument);
    assert!(q.is_null());
    assert_eq!(unsafe { ds_quotient_new(6, 6, &mut q) }, DsStatus::Resource);
    assert_eq!(unsafe { ds_quotient_new(1, 1, ptr::null_mut()) }, DsStatus::NullPointer);
    assert_eq!(last_error(), "null pointer argument");
    let mut n = 0usize;
    assert_eq!(unsafe { ds_run_page_count(ptr::null(), &mut n) }, DsStatus::NullPointer);
    unsafe {
        ds_quotient_free(ptr::null_mut());
        ds_run_free(ptr::null_mut());
        ds_string_free(ptr::null_mut());
    }
}

#[test]
fn run_pages() {
    let mut run = ptr::null_mut();
    assert_eq!(unsafe { ds_run_new(2, 2, 0, -1, 27, &mut run) }, DsStatus::Ok);
    let mut n = 0usize;
    assert_eq!(unsafe { ds_run_page_count(run, &mut n) }, DsStatus::Ok);
    assert_eq!(n, 4);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ds_run_page_json(run, n - 1, &mut s) }, DsStatus::Ok);
    let page: dualsteenrod::sseq::PageSnapshot = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(page.r, 16);
    let total: u64 = page.stem_dims().range(..=page.trusted_max_stem).map(|(_, d)| d).sum();
    assert_eq!(total, 35);
    assert_eq!(unsafe { ds_run_page_json(run, n, &mut s) }, DsStatus::InvalidArgument);
    unsafe { ds_run_free(run) };
}

#[test]
fn verify_entry_point() {
    let mut passed = false;
    let mut detail = ptr::null_mut();
    assert_eq!(unsafe { ds_verify(5, &mut passed, &mut detail) }, DsStatus::Ok);
    assert!(passed);
    assert!(take(detail).contains("certified = true"));
    assert_eq!(unsafe { ds_verify(2, &mut passed, ptr::null_mut()) }, DsStatus::Ok);
    assert_eq!(unsafe { ds_verify(13, &mut passed, ptr::null_mut()) }, DsStatus::InvalidArgument);
}
