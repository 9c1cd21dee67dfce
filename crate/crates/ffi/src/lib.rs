//! C ABI for the zetafred library: opaque model handles, status codes, and
//! a thread-local last-error message. The header `include/zetafred.h` is
//! generated by cbindgen at build time.

use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use zetafred::fredholm::{det_fredholm, resolvent_power_trace, FredholmOptions};
use zetafred::models::{builtin, load_model, SpectrumModel};
use zetafred::verify::{verify_main_theorem, VerifyOptions};
use zetafred::zeta::{log_det_zeta, log_det_zeta_shifted, zeta, ZetaOptions, ZetaValue};

/// Opaque handle to a spectrum model.
pub struct ZfModel {
    inner: SpectrumModel,
}

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZfStatus {
    Ok = 0,
    InvalidArgument = 1,
    NumericError = 2,
    VerificationFailed = 3,
    ParseError = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized: String = msg.chars().filter(|&c| c != '\0').collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn numeric_error(e: zetafred::error::Error) -> ZfStatus {
    set_error(&e.to_string());
    ZfStatus::NumericError
}

/// Copies the last error message (UTF-8, NUL-terminated) into `buf` and
/// returns the full message length in bytes (excluding the NUL). A zero
/// return means no error has been recorded on this thread.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes, or be NULL (then only
/// the length is returned).
#[no_mangle]
pub unsafe extern "C" fn zf_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            // Guarantee termination even when truncated.
            *buf.add(n - 1) = 0;
        }
        bytes.len() - 1
    })
}

/// Returns a handle to a built-in model ("N1", "N2", "HO"), or NULL.
///
/// # Safety
/// `name` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zf_model_builtin(name: *const c_char) -> *mut ZfModel {
    if name.is_null() {
        set_error("name is NULL");
        return std::ptr::null_mut();
    }
    let Ok(name) = CStr::from_ptr(name).to_str() else {
        set_error("name is not valid UTF-8");
        return std::ptr::null_mut();
    };
    match builtin(name) {
        Some(m) => Box::into_raw(Box::new(ZfModel { inner: m })),
        None => {
            set_error(&format!("unknown built-in model '{name}'"));
            std::ptr::null_mut()
        }
    }
}

/// Builds a model from its JSON description; NULL on parse or invariant
/// failure (see zf_last_error).
///
/// # Safety
/// `json` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn zf_model_from_json(json: *const c_char) -> *mut ZfModel {
    if json.is_null() {
        set_error("json is NULL");
        return std::ptr::null_mut();
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        set_error("json is not valid UTF-8");
        return std::ptr::null_mut();
    };
    match load_model(text) {
        Ok(m) => Box::into_raw(Box::new(ZfModel { inner: m })),
        Err(e) => {
            set_error(&e.to_string());
            std::ptr::null_mut()
        }
    }
}

/// Frees a model handle. NULL is a no-op.
///
/// # Safety
/// `model` must come from zf_model_builtin/zf_model_from_json and not have
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn zf_model_free(model: *mut ZfModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Schatten order p of the model; 0 for NULL input.
///
/// # Safety
/// `model` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_model_schatten_order(model: *const ZfModel) -> u32 {
    model.as_ref().map_or(0, |m| m.inner.schatten_p)
}

/// Copies the model name into `buf` (NUL-terminated, truncating) and
/// returns the name length in bytes.
///
/// # Safety
/// `model` must be a live handle; `buf` must point to `cap` writable bytes
/// or be NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_model_name(
    model: *const ZfModel,
    buf: *mut c_char,
    cap: usize,
) -> usize {
    let Some(m) = model.as_ref() else { return 0 };
    let bytes = m.inner.name.as_bytes();
    if !buf.is_null() && cap > 0 {
        let n = bytes.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
        *buf.add(n) = 0;
    }
    bytes.len()
}

unsafe fn write_out(ptr: *mut f64, v: f64) {
    if !ptr.is_null() {
        *ptr = v;
    }
}

unsafe fn model_ref<'a>(model: *const ZfModel) -> Result<&'a SpectrumModel, ZfStatus> {
    match model.as_ref() {
        Some(m) => Ok(&m.inner),
        None => {
            set_error("model is NULL");
            Err(ZfStatus::InvalidArgument)
        }
    }
}

/// tr e^{-tL} at t > 0 to absolute tolerance `tol`.
///
/// # Safety
/// `model` must be a live handle; `out` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_heat_trace(
    model: *const ZfModel,
    t: f64,
    tol: f64,
    out: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match m.heat_trace(t, tol) {
        Ok(v) => {
            write_out(out, v);
            ZfStatus::Ok
        }
        Err(e) => numeric_error(e),
    }
}

/// log det_ζ(L); the dual-route residual is reported through `out_residual`
/// when non-NULL.
///
/// # Safety
/// `model` must be a live handle; out pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_log_det_zeta(
    model: *const ZfModel,
    out: *mut f64,
    out_residual: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match log_det_zeta(m, &ZetaOptions::default()) {
        Ok(d) => {
            write_out(out, d.value.re);
            write_out(out_residual, d.residual);
            ZfStatus::Ok
        }
        Err(e) => numeric_error(e),
    }
}

/// log det_ζ(L + z) for Re z > -λ_1.
///
/// # Safety
/// `model` must be a live handle; out pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_log_det_zeta_shifted(
    model: *const ZfModel,
    z_re: f64,
    z_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match log_det_zeta_shifted(m, Complex64::new(z_re, z_im), &ZetaOptions::default()) {
        Ok(d) => {
            write_out(out_re, d.value.re);
            write_out(out_im, d.value.im);
            ZfStatus::Ok
        }
        Err(e) => numeric_error(e),
    }
}

/// ζ(s; L) at a regular point; a pole of ζ yields NumericError with the
/// Laurent data described in the error message.
///
/// # Safety
/// `model` must be a live handle; out pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_zeta(
    model: *const ZfModel,
    s_re: f64,
    s_im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match zeta(m, Complex64::new(s_re, s_im), &ZetaOptions::default()) {
        Ok(ZetaValue::Regular(v)) => {
            write_out(out_re, v.re);
            write_out(out_im, v.im);
            ZfStatus::Ok
        }
        Ok(ZetaValue::Pole(data)) => {
            set_error(&format!(
                "pole of order {} at s = {}: residue {}, finite part {}",
                data.pole_order(),
                data.location,
                data.residue(),
                data.finite_part()
            ));
            ZfStatus::NumericError
        }
        Err(e) => numeric_error(e),
    }
}

/// log det_order(I + z·L^{-1}); `out_tail_bound` gets the truncation bound.
/// A zero of the determinant (z on the negated spectrum) is reported as
/// VerificationFailed with -inf written to the log.
///
/// # Safety
/// `model` must be a live handle; out pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_fredholm_log_det(
    model: *const ZfModel,
    z_re: f64,
    z_im: f64,
    order: u32,
    out_re: *mut f64,
    out_im: *mut f64,
    out_tail_bound: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match det_fredholm(
        m,
        Complex64::new(z_re, z_im),
        order,
        &FredholmOptions::default(),
    ) {
        Ok(f) => {
            write_out(out_tail_bound, f.tail_bound);
            match f.log_value {
                Some(v) => {
                    write_out(out_re, v.re);
                    write_out(out_im, v.im);
                    ZfStatus::Ok
                }
                None => {
                    write_out(out_re, f64::NEG_INFINITY);
                    write_out(out_im, 0.0);
                    set_error("determinant vanishes: z is on the negated spectrum");
                    ZfStatus::VerificationFailed
                }
            }
        }
        Err(e) => numeric_error(e),
    }
}

/// tr (L+z)^{-N} for N ≥ p.
///
/// # Safety
/// `model` must be a live handle; out pointers must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_resolvent_power_trace(
    model: *const ZfModel,
    z_re: f64,
    z_im: f64,
    n: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    match resolvent_power_trace(
        m,
        Complex64::new(z_re, z_im),
        n,
        &FredholmOptions::default(),
    ) {
        Ok(v) => {
            write_out(out_re, v.re);
            write_out(out_im, v.im);
            ZfStatus::Ok
        }
        Err(e) => numeric_error(e),
    }
}

/// Runs the determinant-identity verification on the default z grid.
/// Returns Ok when it passes, VerificationFailed when the residual exceeds
/// the tolerance; `out_max_residual` gets the largest residual either way.
///
/// # Safety
/// `model` must be a live handle; `out_max_residual` must be writable or NULL.
#[no_mangle]
pub unsafe extern "C" fn zf_verify_main_theorem(
    model: *const ZfModel,
    out_max_residual: *mut f64,
) -> ZfStatus {
    let m = match model_ref(model) {
        Ok(m) => m,
        Err(s) => return s,
    };
    let opts = VerifyOptions::default();
    match verify_main_theorem(m, &opts.z_grid, &opts) {
        Ok(rep) => {
            write_out(out_max_residual, rep.max_residual);
            if rep.passed {
                ZfStatus::Ok
            } else {
                set_error(&format!(
                    "max residual {} exceeds {}",
                    rep.max_residual, opts.tol_identity
                ));
                ZfStatus::VerificationFailed
            }
        }
        Err(e) => numeric_error(e),
    }
}
