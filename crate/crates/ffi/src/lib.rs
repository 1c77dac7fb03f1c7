//! C ABI over the `frobtrace` engine.
//!
//! Objects cross the boundary as opaque handles created by `ft_*_new`/`ft_*_parse`
//! and released with the matching `ft_*_free`. Every fallible call returns an
//! [`FtStatus`]; on failure the message is kept per thread and read back with
//! [`ft_last_error`]. Strings returned through out-parameters are owned by the caller
//! and released with [`ft_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use frobtrace::fixtures::verify_builtin;
use frobtrace::frobenius::{fedder_test, frob_root};
use frobtrace::groebner::Ideal;
use frobtrace::session::{run_session, Options};
use frobtrace::{Error, MonomialOrder, Poly, PolyRing};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Compute = 4,
    ResourceExceeded = 5,
    NotFound = 6,
    Panic = 7,
}

pub struct FtRing {
    inner: Arc<PolyRing>,
}

pub struct FtPoly {
    inner: Poly,
}

pub struct FtIdeal {
    inner: Ideal,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: FtStatus, msg: impl Into<String>) -> FtStatus {
    set_error(msg);
    status
}

fn lib_status(e: &Error) -> FtStatus {
    match e {
        _ if e.is_parse() => FtStatus::Parse,
        Error::ResourceExceeded(_) => FtStatus::ResourceExceeded,
        _ => FtStatus::Compute,
    }
}

fn lib_fail(e: Error) -> FtStatus {
    fail(lib_status(&e), e.to_string())
}

/// Runs `f`, turning panics into [`FtStatus::Panic`] and clearing the error slot on success.
fn guard(f: impl FnOnce() -> FtStatus) -> FtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(FtStatus::Ok) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            FtStatus::Ok
        }
        Ok(s) => s,
        Err(_) => fail(FtStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, FtStatus> {
    if s.is_null() {
        return Err(fail(FtStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(FtStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> FtStatus {
    if out.is_null() {
        return fail(FtStatus::NullPointer, "null output pointer");
    }
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            FtStatus::Ok
        }
        Err(_) => fail(FtStatus::Compute, "result contains a NUL byte"),
    }
}

unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> FtStatus {
    if out.is_null() {
        return fail(FtStatus::NullPointer, "null output pointer");
    }
    *out = Box::into_raw(Box::new(value));
    FtStatus::Ok
}

macro_rules! try_ffi {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! try_lib {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return lib_fail(e),
        }
    };
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, FtStatus> {
    p.as_ref().ok_or_else(|| fail(FtStatus::NullPointer, "null handle"))
}

/// Message of the last failed call on this thread, or NULL. Free with [`ft_string_free`].
#[no_mangle]
pub extern "C" fn ft_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ft_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Polynomial ring over F_p. `vars` is comma-separated; `order` is "lex", "grevlex"
/// or NULL for grevlex.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_ring_new(p: u64, vars: *const c_char, order: *const c_char, out: *mut *mut FtRing) -> FtStatus {
    guard(|| {
        let vars = try_ffi!(read_str(vars));
        let order = if order.is_null() { MonomialOrder::Grevlex } else { try_lib!(MonomialOrder::parse(try_ffi!(read_str(order)))) };
        let names: Vec<&str> = vars.split(',').map(str::trim).collect();
        let ring = try_lib!(PolyRing::new(p, &names, order));
        write_handle(out, FtRing { inner: ring })
    })
}

/// # Safety
/// `r` must be NULL or a live ring handle.
#[no_mangle]
pub unsafe extern "C" fn ft_ring_free(r: *mut FtRing) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// # Safety
/// `ring` must be a live handle, `text` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_poly_parse(ring: *const FtRing, text: *const c_char, out: *mut *mut FtPoly) -> FtStatus {
    guard(|| {
        let ring = try_ffi!(handle(ring));
        let text = try_ffi!(read_str(text));
        let p = try_lib!(ring.inner.parse(text));
        write_handle(out, FtPoly { inner: p })
    })
}

/// # Safety
/// `p` must be NULL or a live polynomial handle.
#[no_mangle]
pub unsafe extern "C" fn ft_poly_free(p: *mut FtPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_poly_to_string(p: *const FtPoly, out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let p = try_ffi!(handle(p));
        write_string(out, p.inner.to_string())
    })
}

/// Ideal generated by `n` polynomials of `ring`.
///
/// # Safety
/// `gens` must point to `n` live polynomial handles (or be NULL when `n` is 0).
#[no_mangle]
pub unsafe extern "C" fn ft_ideal_new(ring: *const FtRing, gens: *const *const FtPoly, n: usize, out: *mut *mut FtIdeal) -> FtStatus {
    guard(|| {
        let ring = try_ffi!(handle(ring));
        if gens.is_null() && n > 0 {
            return fail(FtStatus::NullPointer, "null generator array");
        }
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(try_ffi!(handle(*gens.add(i))).inner.clone());
        }
        let ideal = try_lib!(Ideal::new(&ring.inner, v));
        write_handle(out, FtIdeal { inner: ideal })
    })
}

/// # Safety
/// `i` must be NULL or a live ideal handle.
#[no_mangle]
pub unsafe extern "C" fn ft_ideal_free(i: *mut FtIdeal) {
    if !i.is_null() {
        drop(Box::from_raw(i));
    }
}

/// Reduced Gröbner basis rendered as `⟨g1, g2⟩`.
///
/// # Safety
/// `i` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_ideal_to_string(i: *const FtIdeal, out: *mut *mut c_char) -> FtStatus {
    guard(|| {
        let i = try_ffi!(handle(i));
        write_string(out, try_lib!(i.inner.canonical_string()))
    })
}

/// # Safety
/// Handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_ideal_contains(i: *const FtIdeal, f: *const FtPoly, out: *mut bool) -> FtStatus {
    guard(|| {
        let i = try_ffi!(handle(i));
        let f = try_ffi!(handle(f));
        if out.is_null() {
            return fail(FtStatus::NullPointer, "null output pointer");
        }
        *out = try_lib!(i.inner.contains(&f.inner));
        FtStatus::Ok
    })
}

/// The Frobenius root `I^{[1/p^e]}`.
///
/// # Safety
/// `i` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_frob_root(i: *const FtIdeal, e: u32, out: *mut *mut FtIdeal) -> FtStatus {
    guard(|| {
        let i = try_ffi!(handle(i));
        let r = try_lib!(frob_root(&i.inner, e));
        write_handle(out, FtIdeal { inner: r })
    })
}

/// Fedder's criterion for `h` at the origin.
///
/// # Safety
/// `h` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ft_fedder(h: *const FtPoly, out: *mut bool) -> FtStatus {
    guard(|| {
        let h = try_ffi!(handle(h));
        if out.is_null() {
            return fail(FtStatus::NullPointer, "null output pointer");
        }
        let m = Ideal::coordinate_maximal(h.inner.ring());
        *out = try_lib!(fedder_test(&h.inner, &m));
        FtStatus::Ok
    })
}

/// Runs a session script. The transcript (text, or JSON lines when `json`) goes to
/// `out_transcript`, the CLI exit code to `out_exit`. A script error is reported
/// through `out_exit`, not the status.
///
/// # Safety
/// `script` must be NUL-terminated; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_session_run(script: *const c_char, json: bool, out_transcript: *mut *mut c_char, out_exit: *mut i32) -> FtStatus {
    guard(|| {
        let script = try_ffi!(read_str(script));
        if out_exit.is_null() {
            return fail(FtStatus::NullPointer, "null output pointer");
        }
        let t = run_session(script, &Options::default());
        let mut text = if json { t.render_json() } else { t.render_text() };
        if let (false, Some(e)) = (json, &t.error) {
            text.push_str(&e.to_string());
            text.push('\n');
        }
        *out_exit = t.exit_code();
        write_string(out_transcript, text)
    })
}

/// Runs a built-in example (or `"all"`), reporting checks passed and total.
///
/// # Safety
/// `id` must be NUL-terminated; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn ft_verify_builtin(id: *const c_char, out_report: *mut *mut c_char, out_passed: *mut usize, out_total: *mut usize) -> FtStatus {
    guard(|| {
        let id = try_ffi!(read_str(id));
        if out_passed.is_null() || out_total.is_null() {
            return fail(FtStatus::NullPointer, "null output pointer");
        }
        let Some(s) = verify_builtin(id, &Options::default()) else {
            return fail(FtStatus::NotFound, format!("unknown example `{id}`"));
        };
        *out_passed = s.passed;
        *out_total = s.total;
        let mut text = s.lines.join("\n");
        text.push('\n');
        write_string(out_report, text)
    })
}
