//! C ABI over the toric-bordism library.
//!
//! Every entry point returns a [`TbStatus`] and writes its result through an out-pointer, which is
//! left untouched on failure. Handles and strings handed out here must be released with the
//! matching `*_free` function. Panics never cross the boundary; they surface as `TB_STATUS_PANIC`.
//! The message of the last failure on the calling thread is available from
//! [`tb_last_error_message`].

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};

use toric_bordism::actions::{self, ActionAnalysis, ActionDescription, ActionError, Verdict};
use toric_bordism::blowup::{BlowupError, WeightedBlowupSpec, blowup_report};
use toric_bordism::cobordism::{
    CobordismError, CobordismSetup, FlipKind, QuotientOptions, classify_flip, cobordism_report,
};
use toric_bordism::lattice::Int;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// Bad input: violated block sizes, non-positive weights, malformed descriptions.
    Precondition = 3,
    /// An internal certificate failed; this indicates a bug.
    Internal = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbFlipKind {
    Atiyah = 0,
    NonEqualized = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TbVerdict {
    AtiyahLocal = 0,
    NonEqualizedLocal = 1,
    NotApplicable = 2,
}

/// Opaque cobordism setup.
pub struct TbSetup(CobordismSetup);

/// Opaque result of the action pipeline.
pub struct TbAnalysis(ActionAnalysis);

type Failure = (TbStatus, String);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TbStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("panic inside toric-bordism");
            TbStatus::Panic
        }
    }
}

fn cobordism_failure(e: CobordismError) -> Failure {
    (if e.is_precondition() { TbStatus::Precondition } else { TbStatus::Internal }, e.to_string())
}

fn blowup_failure(e: BlowupError) -> Failure {
    (if e.is_precondition() { TbStatus::Precondition } else { TbStatus::Internal }, e.to_string())
}

fn action_failure(e: ActionError) -> Failure {
    (if e.is_precondition() { TbStatus::Precondition } else { TbStatus::Internal }, e.to_string())
}

fn null() -> Failure {
    (TbStatus::NullArgument, "a required pointer argument is NULL".into())
}

/// `len` values from `ptr`; a NULL `ptr` is allowed only with `len == 0`.
unsafe fn weights<'a>(ptr: *const u64, len: usize) -> Result<&'a [u64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null());
    }
    // SAFETY: the caller guarantees `len` readable values at `ptr`.
    Ok(unsafe { std::slice::from_raw_parts(ptr, len) })
}

fn ints(xs: &[u64]) -> Vec<Int> {
    xs.iter().map(|&x| Int::from(x)).collect()
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    // SAFETY: non-null and, per the caller's contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

fn json_string(value: &impl serde::Serialize) -> Result<*mut c_char, Failure> {
    let s = serde_json::to_string_pretty(value).map_err(|e| (TbStatus::Internal, e.to_string()))?;
    CString::new(s).map(CString::into_raw).map_err(|e| (TbStatus::Internal, e.to_string()))
}

/// Builds the setup `v = (−q_neg, 0^zeros, q_pos)`. With `unchecked`, block sizes outside
/// `1 < d1 <= d2 < n+1` are accepted.
///
/// # Safety
/// `q_neg` and `q_pos` point to `neg_len` and `pos_len` readable values (or are NULL with length
/// 0); `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_setup_new(
    q_neg: *const u64,
    neg_len: usize,
    zeros: usize,
    q_pos: *const u64,
    pos_len: usize,
    unchecked: bool,
    out: *mut *mut TbSetup,
) -> TbStatus {
    guard(|| {
        let (neg, pos) = unsafe { (ints(weights(q_neg, neg_len)?), ints(weights(q_pos, pos_len)?)) };
        let setup = if unchecked {
            CobordismSetup::new_unchecked(&neg, zeros, &pos)
        } else {
            CobordismSetup::new(&neg, zeros, &pos)
        }
        .map_err(cobordism_failure)?;
        unsafe { write(out, Box::into_raw(Box::new(TbSetup(setup)))) }
    })
}

/// # Safety
/// `setup` is NULL or a handle from [`tb_setup_new`] that has not been freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_setup_free(setup: *mut TbSetup) {
    if !setup.is_null() {
        // SAFETY: allocated by `tb_setup_new` via `Box::into_raw`.
        drop(unsafe { Box::from_raw(setup) });
    }
}

/// Flip type by weights, and whether it matches the smoothness of both quotient fans.
///
/// # Safety
/// `setup` is a live handle; `kind` and `characterizations_agree` are valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_setup_classify(
    setup: *const TbSetup,
    kind: *mut TbFlipKind,
    characterizations_agree: *mut bool,
) -> TbStatus {
    guard(|| {
        // SAFETY: a live handle by contract.
        let s = unsafe { setup.as_ref() }.ok_or_else(null)?;
        let c = classify_flip(&s.0).map_err(cobordism_failure)?;
        let k = match c.kind {
            FlipKind::Atiyah => TbFlipKind::Atiyah,
            FlipKind::NonEqualized => TbFlipKind::NonEqualized,
        };
        unsafe {
            write(kind, k)?;
            write(characterizations_agree, c.characterizations_agree)
        }
    })
}

/// The full cobordism report as JSON; free it with [`tb_string_free`].
///
/// # Safety
/// `setup` is a live handle; `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_setup_report_json(setup: *const TbSetup, canonical_basis: bool, out: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let s = unsafe { setup.as_ref() }.ok_or_else(null)?;
        let options = QuotientOptions { canonical_basis, ..QuotientOptions::default() };
        let r = cobordism_report(&s.0, &options).map_err(cobordism_failure)?;
        unsafe { write(out, json_string(&r)?) }
    })
}

/// The weighted blow-up report for `ω = (0^d, q)` as JSON; `legacy` allows `d < 2`.
///
/// # Safety
/// `q` points to `len` readable values; `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_blowup_report_json(
    d: usize,
    q: *const u64,
    len: usize,
    legacy: bool,
    out: *mut *mut c_char,
) -> TbStatus {
    guard(|| {
        let q = ints(unsafe { weights(q, len)? });
        let spec = if legacy { WeightedBlowupSpec::legacy(d, &q) } else { WeightedBlowupSpec::new(d, &q) }
            .map_err(blowup_failure)?;
        let r = blowup_report(&spec).map_err(blowup_failure)?;
        unsafe { write(out, json_string(&r)?) }
    })
}

fn analysis_handle(a: ActionAnalysis) -> *mut TbAnalysis {
    Box::into_raw(Box::new(TbAnalysis(a)))
}

/// Runs the action pipeline on an action-description JSON document.
///
/// # Safety
/// `description` is a NUL-terminated string; `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_from_json(
    description: *const c_char,
    picard_rank_one: bool,
    out: *mut *mut TbAnalysis,
) -> TbStatus {
    guard(|| {
        if description.is_null() {
            return Err(null());
        }
        // SAFETY: NUL-terminated by contract.
        let text = unsafe { CStr::from_ptr(description) }
            .to_str()
            .map_err(|e| (TbStatus::InvalidUtf8, e.to_string()))?;
        let d = ActionDescription::parse(text).map_err(|e| (TbStatus::Precondition, e))?;
        let (a, v) = d.build().map_err(action_failure)?;
        let r = actions::analyze(&a, &v, picard_rank_one || d.picard_rank_one).map_err(action_failure)?;
        unsafe { write(out, analysis_handle(r)) }
    })
}

/// The `H_k` action on `Q^{2n−1}`.
///
/// # Safety
/// `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_quadric_example(n: usize, k: usize, out: *mut *mut TbAnalysis) -> TbStatus {
    guard(|| {
        let (a, v) = actions::quadric_example(n, k).map_err(action_failure)?;
        let r = actions::analyze(&a, &v, true).map_err(action_failure)?;
        unsafe { write(out, analysis_handle(r)) }
    })
}

/// The `H_n` action on the Grassmannian of lines on `Q^{2n−1}`.
///
/// # Safety
/// `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_og_example(n: usize, out: *mut *mut TbAnalysis) -> TbStatus {
    guard(|| {
        let (a, v) = actions::og_example(n).map_err(action_failure)?;
        let r = actions::analyze(&a, &v, true).map_err(action_failure)?;
        unsafe { write(out, analysis_handle(r)) }
    })
}

/// # Safety
/// `analysis` is a live handle; both out-pointers are valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_criticality(
    analysis: *const TbAnalysis,
    criticality: *mut i64,
    bandwidth: *mut i64,
) -> TbStatus {
    guard(|| {
        let a = unsafe { analysis.as_ref() }.ok_or_else(null)?;
        unsafe {
            write(criticality, a.0.report.criticality)?;
            write(bandwidth, a.0.report.bandwidth)
        }
    })
}

/// # Safety
/// `analysis` is a live handle; `verdict` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_verdict(analysis: *const TbAnalysis, verdict: *mut TbVerdict) -> TbStatus {
    guard(|| {
        let a = unsafe { analysis.as_ref() }.ok_or_else(null)?;
        let v = match a.0.verdict.verdict {
            Verdict::AtiyahLocal => TbVerdict::AtiyahLocal,
            Verdict::NonEqualizedLocal => TbVerdict::NonEqualizedLocal,
            Verdict::NotApplicable(_) => TbVerdict::NotApplicable,
        };
        unsafe { write(verdict, v) }
    })
}

/// The whole analysis as JSON; free it with [`tb_string_free`].
///
/// # Safety
/// `analysis` is a live handle; `out` is valid for writes.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_json(analysis: *const TbAnalysis, out: *mut *mut c_char) -> TbStatus {
    guard(|| {
        let a = unsafe { analysis.as_ref() }.ok_or_else(null)?;
        unsafe { write(out, json_string(&a.0)?) }
    })
}

/// # Safety
/// `analysis` is NULL or a live handle, which is invalid afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_analysis_free(analysis: *mut TbAnalysis) {
    if !analysis.is_null() {
        // SAFETY: allocated by one of the `tb_analysis_*` constructors via `Box::into_raw`.
        drop(unsafe { Box::from_raw(analysis) });
    }
}

/// # Safety
/// `s` is NULL or a string returned by this library that has not been freed.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn tb_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: produced by `CString::into_raw` in this crate.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// A copy of the last failure message on this thread, or NULL; free it with [`tb_string_free`].
#[unsafe(no_mangle)]
pub extern "C" fn tb_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null_mut(), |c| c.clone().into_raw()))
}
