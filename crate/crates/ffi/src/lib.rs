//! C interface to `legendre_index`.
//!
//! Every function returns an [`LiStatus`]; results are written through out
//! pointers. Parameters, functions and wedge problems are opaque handles
//! created by `*_new`/`*_parse` and released by the matching `*_free`. On
//! failure the message of the last error on the calling thread is available
//! from [`li_last_error_message`]. Panics never cross the boundary; they are
//! reported as [`LiStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use legendre_index::kernel::{phi_direct, phi_fourier_cosine, phi_mellin_barnes};
use legendre_index::transforms::{
    forward_f, forward_g, invert_g, sample_g, Interpolation, InversionMode, LogGrid,
    SampledFunction, Table, TransformResult,
};
use legendre_index::wedge::{solution_at, WedgeProblem};
use legendre_index::{ContourSpec, Error, TransformParameters};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    Domain = 3,
    Pole = 4,
    NonConvergence = 5,
    NonFinite = 6,
    TailBound = 7,
    Capability = 8,
    Panic = 9,
}

/// Route used by [`li_kernel`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiKernelMethod {
    Direct = 0,
    MellinBarnes = 1,
    FourierCosine = 2,
}

/// Interpolation rule of a tabulated function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiInterpolation {
    Linear = 0,
    Cubic = 1,
}

/// Transform parameters (the order μ).
pub struct LiParams {
    inner: TransformParameters,
}

/// An input function: a builtin or a tabulated one.
pub struct LiFunction {
    inner: SampledFunction,
}

/// A wedge boundary value problem.
pub struct LiWedge {
    inner: WedgeProblem,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

type Failure = (LiStatus, String);

fn status_of(e: &Error) -> LiStatus {
    match e {
        Error::Pole { .. } => LiStatus::Pole,
        Error::Domain { .. } => LiStatus::Domain,
        Error::NonConvergence { .. } => LiStatus::NonConvergence,
        Error::NonFinite { .. } => LiStatus::NonFinite,
        Error::TailBound { .. } => LiStatus::TailBound,
        Error::Capability(_) => LiStatus::Capability,
        Error::InvalidParameter(_) => LiStatus::InvalidParameter,
    }
}

fn lib(e: Error) -> Failure {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> Failure {
    (LiStatus::NullPointer, format!("{what} is null"))
}

fn set_last_error(message: String) {
    LAST_ERROR.with(|m| *m.borrow_mut() = message);
}

/// Runs `body`, records its error message and converts panics.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> LiStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error(String::new());
            LiStatus::Ok
        }
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {message}"));
            LiStatus::Panic
        }
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn input<'a>(p: *const f64, n: usize, what: &str) -> Result<&'a [f64], Failure> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, n))
}

unsafe fn output<'a>(p: *mut f64, n: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if n == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, n))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

/// Copies values and, when `errs` is non-null, error estimates.
unsafe fn write_result(
    r: &TransformResult,
    values: *mut f64,
    errs: *mut f64,
) -> Result<(), Failure> {
    output(values, r.len(), "values")?.copy_from_slice(&r.values);
    if !errs.is_null() {
        output(errs, r.len(), "errs")?.copy_from_slice(&r.per_point_err);
    }
    Ok(())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn li_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn li_status_message(status: LiStatus) -> *const c_char {
    let s: &'static str = match status {
        LiStatus::Ok => "ok\0",
        LiStatus::NullPointer => "null pointer argument\0",
        LiStatus::InvalidParameter => "invalid parameter\0",
        LiStatus::Domain => "argument outside the domain\0",
        LiStatus::Pole => "pole of a gamma factor\0",
        LiStatus::NonConvergence => "computation did not converge\0",
        LiStatus::NonFinite => "non-finite intermediate value\0",
        LiStatus::TailBound => "contour tail exceeds its envelope\0",
        LiStatus::Capability => "outside the supported range\0",
        LiStatus::Panic => "internal panic\0",
    };
    s.as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (at most
/// `len − 1` bytes plus a NUL) and returns its full length in bytes. An
/// empty message means the last call succeeded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn li_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|m| {
        let m = m.borrow();
        let bytes = m.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates transform parameters for order `mu < 1/2`.
///
/// # Safety
/// `out` must be null or valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn li_params_new(mu: f64, out: *mut *mut LiParams) -> LiStatus {
    guard(|| {
        let inner = TransformParameters::new(mu).map_err(lib)?;
        put_handle(out, LiParams { inner })
    })
}

/// # Safety
/// `p` must be null or a handle from [`li_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn li_params_free(p: *mut LiParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Parses a builtin function such as `exp_decay(a=1)`.
///
/// # Safety
/// `spec` must be null or a NUL-terminated string; `out` must be null or
/// valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn li_function_parse(
    spec: *const c_char,
    out: *mut *mut LiFunction,
) -> LiStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        let text = CStr::from_ptr(spec).to_str().map_err(|e| {
            (
                LiStatus::InvalidParameter,
                format!("function spec is not UTF-8: {e}"),
            )
        })?;
        let inner = SampledFunction::parse(text).map_err(lib)?;
        put_handle(out, LiFunction { inner })
    })
}

/// Builds a tabulated function from `n` strictly ascending abscissas.
///
/// # Safety
/// `xs` and `ys` must point to `n` readable values; `out` must be null or
/// valid for writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn li_function_from_table(
    xs: *const f64,
    ys: *const f64,
    n: usize,
    interpolation: LiInterpolation,
    out: *mut *mut LiFunction,
) -> LiStatus {
    guard(|| {
        let xs = input(xs, n, "xs")?.to_vec();
        let ys = input(ys, n, "ys")?.to_vec();
        let rule = match interpolation {
            LiInterpolation::Linear => Interpolation::Linear,
            LiInterpolation::Cubic => Interpolation::Cubic,
        };
        let table = Table::new(xs, ys, rule).map_err(lib)?;
        put_handle(
            out,
            LiFunction {
                inner: SampledFunction::tabulated(table),
            },
        )
    })
}

/// The function's value at `x`.
///
/// # Safety
/// `f` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn li_function_eval(f: *const LiFunction, x: f64, out: *mut f64) -> LiStatus {
    guard(|| {
        let f = handle(f, "function")?;
        put(out, f.inner.eval(x), "out")
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn li_function_free(f: *mut LiFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The kernel Φ(x, τ) by the chosen route. `err` may be null.
///
/// # Safety
/// `p` must be a live handle; `value` must be valid for writing; `err` must
/// be null or valid for writing.
#[no_mangle]
pub unsafe extern "C" fn li_kernel(
    p: *const LiParams,
    method: LiKernelMethod,
    x: f64,
    tau: f64,
    value: *mut f64,
    err: *mut f64,
) -> LiStatus {
    guard(|| {
        let p = &handle(p, "params")?.inner;
        let k = match method {
            LiKernelMethod::Direct => phi_direct(x, tau, p),
            LiKernelMethod::MellinBarnes => {
                phi_mellin_barnes(x, tau, p, &ContourSpec::new(p.default_abscissa()))
            }
            LiKernelMethod::FourierCosine => phi_fourier_cosine(x, tau, p),
        }
        .map_err(lib)?;
        put(value, k.value, "value")?;
        if !err.is_null() {
            err.write(k.err_estimate);
        }
        Ok(())
    })
}

/// `F(τ)` on `n` points; `errs` may be null.
///
/// # Safety
/// `f` and `p` must be live handles; `taus` must hold `n` values and
/// `values` (and `errs` when non-null) room for `n`.
#[no_mangle]
pub unsafe extern "C" fn li_forward_f(
    f: *const LiFunction,
    p: *const LiParams,
    taus: *const f64,
    n: usize,
    values: *mut f64,
    errs: *mut f64,
) -> LiStatus {
    guard(|| {
        let f = &handle(f, "function")?.inner;
        let p = &handle(p, "params")?.inner;
        let r = forward_f(f, p, input(taus, n, "taus")?).map_err(lib)?;
        write_result(&r, values, errs)
    })
}

/// `G(x)` on `n` points; `errs` may be null.
///
/// # Safety
/// As for [`li_forward_f`].
#[no_mangle]
pub unsafe extern "C" fn li_forward_g(
    g: *const LiFunction,
    p: *const LiParams,
    xs: *const f64,
    n: usize,
    values: *mut f64,
    errs: *mut f64,
) -> LiStatus {
    guard(|| {
        let g = &handle(g, "function")?.inner;
        let p = &handle(p, "params")?.inner;
        let r = forward_g(g, p, input(xs, n, "xs")?).map_err(lib)?;
        write_result(&r, values, errs)
    })
}

/// Samples `G g` on the default log grid and reconstructs `g` at `n`
/// points: the limit form when `epsilon ≤ 0`, the regularised form at
/// `epsilon ∈ (0, 1)` otherwise.
///
/// # Safety
/// As for [`li_forward_f`].
#[no_mangle]
pub unsafe extern "C" fn li_reconstruct_g(
    g: *const LiFunction,
    p: *const LiParams,
    epsilon: f64,
    taus: *const f64,
    n: usize,
    values: *mut f64,
    errs: *mut f64,
) -> LiStatus {
    guard(|| {
        let g = &handle(g, "function")?.inner;
        let p = &handle(p, "params")?.inner;
        let taus = input(taus, n, "taus")?;
        let mode = if epsilon > 0.0 {
            InversionMode::Epsilon(epsilon)
        } else {
            InversionMode::LimitForm
        };
        let samples = sample_g(g, p, &LogGrid::default()).map_err(lib)?;
        let inv = invert_g(&samples, p, taus, mode).map_err(lib)?;
        write_result(&inv.result, values, errs)
    })
}

/// A wedge problem of opening `beta` with boundary data `g` at θ = β.
/// The handle keeps its own copies of `p` and `g`.
///
/// # Safety
/// `p` and `g` must be live handles; `out` must be null or valid for
/// writing one pointer.
#[no_mangle]
pub unsafe extern "C" fn li_wedge_new(
    beta: f64,
    p: *const LiParams,
    g: *const LiFunction,
    out: *mut *mut LiWedge,
) -> LiStatus {
    guard(|| {
        let p = handle(p, "params")?.inner;
        let g = handle(g, "function")?.inner.clone();
        let inner = WedgeProblem::new(beta, p, g).map_err(lib)?;
        put_handle(out, LiWedge { inner })
    })
}

/// The solution u(r, θ).
///
/// # Safety
/// `w` must be a live handle; `out` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn li_wedge_solution(
    w: *const LiWedge,
    r: f64,
    theta: f64,
    out: *mut f64,
) -> LiStatus {
    guard(|| {
        let w = handle(w, "wedge")?;
        let u = solution_at(&w.inner, r, theta).map_err(lib)?;
        put(out, u, "out")
    })
}

/// # Safety
/// `w` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn li_wedge_free(w: *mut LiWedge) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}
