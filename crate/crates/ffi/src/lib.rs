//! C ABI over `dualsteenrod`.
//!
//! Every function returns a [`DsStatus`]; on failure a message is available
//! from [`ds_last_error`] on the same thread. Strings handed out by the library
//! are NUL-terminated UTF-8 and must be released with [`ds_string_free`].
//! Handles are opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use dualsteenrod::milnor::{zeta, TruncationSpec};
use dualsteenrod::polycore::json::poly_to_json;
use dualsteenrod::polycore::Poly;
use dualsteenrod::quotient::{build_quotient, QuotientLimits, QuotientRing};
use dualsteenrod::sseq::{
    abutment_differentials, default_stem_bound, end_run, quotient_run, PageSnapshot,
};
use dualsteenrod::verify::run_check;
use dualsteenrod::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Resource = 3,
    Internal = 4,
    Panic = 5,
}

/// A finite quotient `A<k>* / (zeta_{m+1}, ..., zeta_{m+k})`.
pub struct DsQuotient {
    inner: QuotientRing,
}

/// The pages of one spectral sequence run.
pub struct DsRun {
    pages: Vec<PageSnapshot>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DsStatus {
    match err {
        Error::ResourceLimit(_) | Error::PrecisionExceeded(_) => DsStatus::Resource,
        Error::Invariant(_) | Error::Abutment(_) | Error::InexactDivision => DsStatus::Internal,
        _ => DsStatus::InvalidArgument,
    }
}

struct Fail(DsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> DsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            DsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            DsStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(DsStatus::NullPointer, "null pointer argument".into())
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(null)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(DsStatus::InvalidArgument, "string is not UTF-8".into()))
}

fn give_string(s: String, out: &mut *mut c_char) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(DsStatus::Internal, "interior NUL in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Fail> {
    serde_json::to_string(value).map_err(|e| Fail(DsStatus::Internal, e.to_string()))
}

/// Message for the last failed call on this thread, or NULL. Owned by the
/// library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn ds_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `zeta_n` as polynomial JSON. `truncate = 0` works in `F2[xi1..xin]`,
/// otherwise in `A<truncate>*`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_zeta_json(n: u32, truncate: u32, out: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let out = out_ref(out)?;
        let spec = if truncate == 0 {
            TruncationSpec::Full(n.max(1))
        } else {
            TruncationSpec::Trunc(truncate)
        };
        give_string(poly_to_json(&zeta(n, spec)?), out)
    })
}

/// Builds and verifies the quotient for `(k, m)` under default limits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_new(k: u32, m: u32, out: *mut *mut DsQuotient) -> DsStatus {
    guard(|| {
        let out = out_ref(out)?;
        let inner = build_quotient(k, m, &QuotientLimits::default())?;
        *out = Box::into_raw(Box::new(DsQuotient { inner }));
        Ok(())
    })
}

/// # Safety
/// `q` must come from [`ds_quotient_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_free(q: *mut DsQuotient) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// # Safety
/// `q` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_total_dim(q: *const DsQuotient, out: *mut u64) -> DsStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(null)?;
        *out_ref(out)? = q.inner.total_dim();
        Ok(())
    })
}

/// # Safety
/// `q` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_top_degree(q: *const DsQuotient, out: *mut i64) -> DsStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(null)?;
        *out_ref(out)? = q.inner.top_degree();
        Ok(())
    })
}

/// Dimension in one internal degree.
///
/// # Safety
/// `q` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_dim(q: *const DsQuotient, degree: i64, out: *mut u64) -> DsStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(null)?;
        *out_ref(out)? = q.inner.dim_in(degree) as u64;
        Ok(())
    })
}

/// Normal form of a polynomial written like `xi1^3 xi2 + xi2^2`, as polynomial JSON.
///
/// # Safety
/// `q` and `out` must be valid pointers; `poly` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_normal_form_json(
    q: *const DsQuotient,
    poly: *const c_char,
    out: *mut *mut c_char,
) -> DsStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(null)?;
        let out = out_ref(out)?;
        let p = Poly::parse(q.inner.table().clone(), str_arg(poly)?)?;
        give_string(poly_to_json(&q.inner.normal_form(&p)?), out)
    })
}

/// Frobenius pairing report as JSON.
///
/// # Safety
/// `q` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_quotient_frobenius_json(q: *const DsQuotient, out: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let q = q.as_ref().ok_or_else(null)?;
        let out = out_ref(out)?;
        give_string(json(&q.inner.frobenius_check()?)?, out)
    })
}

/// Runs the spectral sequence for `(k, m, n)`. `end_j < 0` runs the bare
/// quotient; otherwise the run is smashed with `End(M_{<=end_j})` (and `n`
/// is ignored). `stem_bound <= 0` selects the default bound.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ds_run_new(
    k: u32,
    m: u32,
    n: u32,
    end_j: i32,
    stem_bound: i64,
    out: *mut *mut DsRun,
) -> DsStatus {
    guard(|| {
        let out = out_ref(out)?;
        let extra = abutment_differentials(k, m)?;
        let steps = if end_j < 0 {
            let bound = if stem_bound > 0 { stem_bound } else { default_stem_bound(k, m, n)? };
            quotient_run(k, m, n, bound, &extra)?
        } else {
            let bound = if stem_bound > 0 { stem_bound } else { default_stem_bound(k, m, 0)? };
            end_run(k, m, end_j as u32, bound, &extra)?
        };
        let pages = steps.iter().map(|s| s.page.snapshot(s.ranks.as_ref())).collect();
        *out = Box::into_raw(Box::new(DsRun { pages }));
        Ok(())
    })
}

/// # Safety
/// `run` must come from [`ds_run_new`] and not have been freed. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn ds_run_free(run: *mut DsRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of recorded pages (each page carrying a differential, then the last page).
///
/// # Safety
/// `run` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_run_page_count(run: *const DsRun, out: *mut usize) -> DsStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(null)?;
        *out_ref(out)? = run.pages.len();
        Ok(())
    })
}

/// Page `index` as JSON `{r, stem_bound, trusted_max_stem, entries, differentials}`.
///
/// # Safety
/// `run` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ds_run_page_json(run: *const DsRun, index: usize, out: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let run = run.as_ref().ok_or_else(null)?;
        let out = out_ref(out)?;
        let page = run.pages.get(index).ok_or_else(|| {
            Fail(
                DsStatus::InvalidArgument,
                format!("page index {index} out of range ({} pages)", run.pages.len()),
            )
        })?;
        give_string(json(page)?, out)
    })
}

/// Runs acceptance check `id` (1 to 12); `passed` receives the outcome and
/// `detail` (if not NULL) a description to be freed with [`ds_string_free`].
///
/// # Safety
/// `passed` must be valid; `detail` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn ds_verify(id: u32, passed: *mut bool, detail: *mut *mut c_char) -> DsStatus {
    guard(|| {
        let passed = out_ref(passed)?;
        if !(1..=12).contains(&id) {
            return Err(Fail(DsStatus::InvalidArgument, format!("no check numbered {id}")));
        }
        let outcome = run_check(id);
        *passed = outcome.passed;
        if let Some(d) = detail.as_mut() {
            give_string(outcome.detail, d)?;
        }
        Ok(())
    })
}
