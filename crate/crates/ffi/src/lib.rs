//! C ABI over the solitonforge library.
//!
//! Handles are opaque heap objects created by `*_new` and released by the
//! matching `*_free`. Every fallible call returns an [`SfStatus`]; on failure
//! a message is available from [`sf_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use solitonforge::field::{cnl_residual, scnl_residual};
use solitonforge::sigma2::{from_sigma2, sigma2_nsoliton, sigma2_residual, PhaseConvention, Sigma2Spec};
use solitonforge::soliton_engine::{NSoliton, SolitonSpec};
use solitonforge::{Error, FieldPair, Orders, C64};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The construction degenerates at the requested point.
    Singular = 3,
    NumericalFailure = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SfComplex {
    pub re: f64,
    pub im: f64,
}

impl From<SfComplex> for C64 {
    fn from(z: SfComplex) -> C64 {
        C64::new(z.re, z.im)
    }
}

impl From<C64> for SfComplex {
    fn from(z: C64) -> SfComplex {
        SfComplex { re: z.re, im: z.im }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfConvention {
    /// Seed terms `e^{−iL}`.
    HalfPhase = 0,
    /// Seed terms `e^{−2iL}`.
    FullPhase = 1,
}

/// σ₁-constrained n-soliton on the zero background.
pub struct SfSoliton {
    field: NSoliton,
}

/// σ₂ solution built from an odd exponential sum.
pub struct SfSigma2 {
    spec: Sigma2Spec,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SfStatus {
    match e {
        Error::InvalidSpec(_) | Error::Pole(_) => SfStatus::InvalidArgument,
        Error::DressingSingularity { .. }
        | Error::Singular { .. }
        | Error::VanishingDeterminant { .. }
        | Error::LadderSingularity { .. }
        | Error::ZeroValue { .. } => SfStatus::Singular,
        _ => SfStatus::NumericalFailure,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (SfStatus, String)>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SfStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            SfStatus::Panic
        }
    }
}

fn lib(e: Error) -> (SfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SfStatus, String) {
    (SfStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `ptr` must be null or point to `len` readable values.
unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], (SfStatus, String)> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Builds an n-soliton from `n` pairs `(lambdas[k], alphas[k])`; each pair is
/// completed by its conjugate partner.
///
/// # Safety
/// `lambdas` and `alphas` must hold `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_soliton_new(
    lambdas: *const SfComplex,
    alphas: *const SfComplex,
    n: usize,
    out: *mut *mut SfSoliton,
) -> SfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let l = slice(lambdas, n, "lambdas")?;
        let a = slice(alphas, n, "alphas")?;
        let pairs: Vec<(C64, C64)> = l.iter().zip(a).map(|(l, a)| ((*l).into(), (*a).into())).collect();
        let spec = SolitonSpec::sigma1(&pairs).map_err(lib)?;
        *out = Box::into_raw(Box::new(SfSoliton {
            field: NSoliton::on_vacuum(spec),
        }));
        Ok(())
    })
}

/// `(u, v)` at `(x, t)`; `v = u*` for these solutions.
///
/// # Safety
/// `h` must come from [`sf_soliton_new`]; `u` and `v` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_soliton_eval(h: *const SfSoliton, x: f64, t: f64, u: *mut SfComplex, v: *mut SfComplex) -> SfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if u.is_null() || v.is_null() {
            return Err(null("output"));
        }
        let (a, b) = h.field.jets(x, t, Orders::new(0, 0)).map_err(lib)?.values();
        *u = a.into();
        *v = b.into();
        Ok(())
    })
}

/// Largest of the CNL and coupled-system residuals at `(x, t)`.
///
/// # Safety
/// `h` must come from [`sf_soliton_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_soliton_residual(h: *const SfSoliton, x: f64, t: f64, out: *mut f64) -> SfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let j = h.field.jets(x, t, Orders::new(2, 1)).map_err(lib)?;
        let (a, b) = scnl_residual(&j).map_err(lib)?;
        let c = cnl_residual(&j.u).map_err(lib)?;
        *out = a.norm().max(b.norm()).max(c.norm());
        Ok(())
    })
}

/// # Safety
/// `h` must be null or come from [`sf_soliton_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_soliton_free(h: *mut SfSoliton) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Builds a σ₂ solution from `count = 2n + 1` values of λ (real or in
/// conjugate pairs). `free[k]` fixes the phase of `c_k` for real λ and `c_k`
/// itself for `Im λ > 0`; the remaining moduli follow from the constraints.
///
/// # Safety
/// `lambdas` and `free` must hold `count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_sigma2_new(
    lambdas: *const SfComplex,
    free: *const SfComplex,
    count: usize,
    convention: SfConvention,
    out: *mut *mut SfSigma2,
) -> SfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let l: Vec<C64> = slice(lambdas, count, "lambdas")?.iter().map(|&z| z.into()).collect();
        let f: Vec<C64> = slice(free, count, "free")?.iter().map(|&z| z.into()).collect();
        let conv = match convention {
            SfConvention::HalfPhase => PhaseConvention::HalfPhase,
            SfConvention::FullPhase => PhaseConvention::FullPhase,
        };
        let spec = Sigma2Spec::normalized(l, &f, conv).map_err(lib)?;
        *out = Box::into_raw(Box::new(SfSigma2 { spec }));
        Ok(())
    })
}

/// `(u, v)` at `(x, t)`, with `|v| = 1`.
///
/// # Safety
/// `h` must come from [`sf_sigma2_new`]; `u` and `v` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_sigma2_eval(h: *const SfSigma2, x: f64, t: f64, u: *mut SfComplex, v: *mut SfComplex) -> SfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if u.is_null() || v.is_null() {
            return Err(null("output"));
        }
        let f = sigma2_nsoliton(&h.spec, x, t, Orders::new(2, 0)).map_err(lib)?;
        let (a, b) = from_sigma2(&f).map_err(lib)?.values();
        *u = a.into();
        *v = b.into();
        Ok(())
    })
}

/// Largest phase-equation residual at `(x, t)`.
///
/// # Safety
/// `h` must come from [`sf_sigma2_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sf_sigma2_residual(h: *const SfSigma2, x: f64, t: f64, out: *mut f64) -> SfStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(|| null("handle"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sigma2_residual(&h.spec, x, t).map_err(lib)?;
        Ok(())
    })
}

/// # Safety
/// `h` must be null or come from [`sf_sigma2_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_sigma2_free(h: *mut SfSigma2) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}
