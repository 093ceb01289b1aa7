//! C interface to the shallow-tunnel solver.
//!
//! Models are opaque handles created from a TOML document and released with
//! [`st_model_free`]. Every fallible call returns an [`StStatus`]; the message
//! of the most recent failure on the calling thread is available through
//! [`st_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use shallow_tunnel::config::{load_config_str, reference_config};
use shallow_tunnel::fields::{total_stress, Filter};
use shallow_tunnel::model::TunnelModel;
use shallow_tunnel::TunnelError;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Config = 4,
    Geometry = 5,
    Domain = 6,
    Singular = 7,
    Divergence = 8,
    NonConvergence = 9,
    Io = 10,
    Panic = 11,
}

/// Opaque solved model.
pub struct StModel {
    inner: TunnelModel,
}

/// Cartesian fields at one point and time. Stresses in kPa, displacements in m.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct StFieldSample {
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_xy: f64,
    pub sigma_x_total: f64,
    pub sigma_y_total: f64,
    pub tau_xy_total: f64,
    pub u: f64,
    pub v: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let mut s = msg.into();
    s.retain(|c| c != '\0');
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(s).unwrap_or_default()));
}

fn status_of(err: &TunnelError) -> StStatus {
    match err {
        TunnelError::DegenerateGeometry(_) | TunnelError::Pole(_) => StStatus::Geometry,
        TunnelError::Domain { .. } => StStatus::Domain,
        TunnelError::Singular { .. } => StStatus::Singular,
        TunnelError::Divergence { .. } => StStatus::Divergence,
        TunnelError::NonConvergence { .. } => StStatus::NonConvergence,
        TunnelError::Config(_) => StStatus::Config,
        TunnelError::Parse(_) => StStatus::Parse,
        TunnelError::Io(_) | TunnelError::Csv(_) | TunnelError::Json(_) => StStatus::Io,
    }
}

fn guard(f: impl FnOnce() -> Result<(), StStatus>) -> StStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => StStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            StStatus::Panic
        }
    }
}

fn fail(err: TunnelError) -> StStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

fn null(what: &str) -> StStatus {
    set_error(format!("{what} is null"));
    StStatus::NullPointer
}

fn publish(model: TunnelModel, out: *mut *mut StModel) {
    let boxed = Box::new(StModel { inner: model });
    // SAFETY: caller checked `out` for null.
    unsafe { *out = Box::into_raw(boxed) };
}

/// Builds and solves a model from a NUL-terminated TOML document.
///
/// # Safety
/// `toml` must point to a NUL-terminated string and `out` to writable storage
/// for one pointer. On success `*out` owns a model to be released with
/// [`st_model_free`]; on failure `*out` is set to null.
#[no_mangle]
pub unsafe extern "C" fn st_model_new_from_toml(toml: *const c_char, out: *mut *mut StModel) -> StStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        if toml.is_null() {
            return Err(null("toml"));
        }
        let text = CStr::from_ptr(toml).to_str().map_err(|e| {
            set_error(format!("config is not UTF-8: {e}"));
            StStatus::InvalidUtf8
        })?;
        let cfg = load_config_str(text).map_err(fail)?;
        let model = TunnelModel::build(&cfg).map_err(fail)?;
        publish(model, out);
        Ok(())
    })
}

/// Builds and solves the built-in reference case.
///
/// # Safety
/// `out` must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn st_model_new_reference(out: *mut *mut StModel) -> StStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let model = TunnelModel::build(&reference_config()).map_err(fail)?;
        publish(model, out);
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a pointer obtained from a constructor in this
/// library that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn st_model_free(model: *mut StModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Number of correction passes the solver needed.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_model_iterations(model: *const StModel, out: *mut usize) -> StStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        *o = m.inner.solution.iterations;
        Ok(())
    })
}

/// Series truncation order `N`; coefficient arrays have `2N + 1` entries.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_model_order(model: *const StModel, out: *mut usize) -> StStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        *o = m.inner.solution.n;
        Ok(())
    })
}

/// Copies the real coefficients `f_{-N}..f_N` into `buf`.
///
/// # Safety
/// `buf` must have room for `len` doubles; `len` must be at least `2N + 1`.
#[no_mangle]
pub unsafe extern "C" fn st_model_coefficients(model: *const StModel, buf: *mut f64, len: usize) -> StStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let f = &m.inner.solution.f;
        if len < f.len() {
            set_error(format!("buffer holds {len} values, {} needed", f.len()));
            return Err(StStatus::Domain);
        }
        ptr::copy_nonoverlapping(f.as_ptr(), buf, f.len());
        Ok(())
    })
}

/// Fields at physical point `(x, y)` and grid time `t` (days).
/// Points with `y = 0` are treated as ground-surface points.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn st_model_eval(
    model: *const StModel,
    x: f64,
    y: f64,
    t: f64,
    out: *mut StFieldSample,
) -> StStatus {
    guard(|| {
        let m = model.as_ref().ok_or_else(|| null("model"))?;
        let o = out.as_mut().ok_or_else(|| null("out"))?;
        let z = Complex64::new(x, y);
        if !m.inner.config.geometry.contains(z) {
            set_error(format!("point ({x}, {y}) is outside the ground region"));
            return Err(StStatus::Domain);
        }
        let s = m.inner.sample(z, t, Filter::Auto).map_err(fail)?;
        let tot = total_stress(&s, &m.inner.config.material);
        *o = StFieldSample {
            sigma_x: s.sigma_x,
            sigma_y: s.sigma_y,
            tau_xy: s.tau_xy,
            sigma_x_total: tot.sigma_x,
            sigma_y_total: tot.sigma_y,
            tau_xy_total: tot.tau_xy,
            u: s.u,
            v: s.v,
        };
        Ok(())
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn st_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
