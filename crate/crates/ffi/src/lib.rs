// SPDX-License-Identifier: MIT OR Apache-2.0

//! C ABI over `quantum-rhs`.
//!
//! Conventions:
//!
//! * every fallible entry point returns a [`QrStatus`]; results are written
//!   through out-pointers only on [`QrStatus::Ok`];
//! * objects are opaque handles created by `qr_*_new`/`qr_*` constructors
//!   and released with the matching `qr_*_free`;
//! * strings returned by the library are NUL-terminated, heap-allocated and
//!   must be released with [`qr_string_free`];
//! * the message for the most recent failure on the calling thread is
//!   available from [`qr_last_error_message`];
//! * panics never cross the boundary; they are reported as
//!   [`QrStatus::Panic`].
//!
//! The header `include/quantum_rhs.h` is generated by `build.rs`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quantum_rhs::cyclotomic::Precision;
use quantum_rhs::jones::JonesRegistry;
use quantum_rhs::ohtsuki::{self, LambdaSource, ReconstructOptions, Verdict};
use quantum_rhs::series::LambdaSeries;
use quantum_rhs::{nt, surgery, CycInt, Error, ManifoldSpec, PrimeK};

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QrStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed manifold description or JSON.
    InvalidSpec = 3,
    /// The level argument is not an odd prime.
    NotPrime = 4,
    /// The manifold is not a rational homology sphere.
    NotRhs = 5,
    /// `K` divides `|H₁|`; the invariant is outside the supported range.
    H1DivisibleByK = 6,
    /// `K` divides a Seifert fibre multiplicity.
    PDivisibleByK = 7,
    /// The request is valid but not implemented for this manifold.
    Unsupported = 8,
    /// An index argument was out of range.
    OutOfRange = 9,
    /// Not enough primes to reconstruct the requested coefficients.
    InsufficientModulus = 10,
    /// An internal consistency check failed.
    ComputationFailed = 11,
    /// A Rust panic was caught at the boundary.
    Panic = 12,
}

impl From<&Error> for QrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::NotPrime(_) => QrStatus::NotPrime,
            Error::NotRhs(_) | Error::HZero => QrStatus::NotRhs,
            Error::H1DivisibleByK { .. } => QrStatus::H1DivisibleByK,
            Error::PDivisibleByK { .. } => QrStatus::PDivisibleByK,
            Error::Unsupported(_) => QrStatus::Unsupported,
            Error::InsufficientModulus { .. } | Error::InsufficientTerms { .. } => {
                QrStatus::InsufficientModulus
            }
            e if e.is_input_error() => QrStatus::InvalidSpec,
            _ => QrStatus::ComputationFailed,
        }
    }
}

/// Opaque manifold description.
pub struct QrManifold(ManifoldSpec);

/// Opaque exact element of `ℤ[q̌]`, `q̌ = e^{2πi/K}`.
pub struct QrCycInt(CycInt);

/// Opaque λ-series `λ₀..λ_{n_max}`.
pub struct QrLambda(LambdaSeries);

/// A double-precision complex number.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QrComplex {
    pub re: f64,
    pub im: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', "\\0");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(msg).ok());
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

struct Fail(QrStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(QrStatus::from(&e), e.to_string())
    }
}

type FfiResult<T> = std::result::Result<T, Fail>;

/// Runs `f` behind a panic guard, records any failure and converts it to a
/// status code.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> QrStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => QrStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("panic: {msg}"));
            QrStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(QrStatus::NullPointer, format!("{what} is NULL"))
}

/// # Safety
/// `p` is NULL or points to a live object of type `T`.
unsafe fn borrow<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| null(what))
}

/// # Safety
/// `out` is NULL or valid for a write of `T`.
unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> FfiResult<()> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// # Safety
/// `s` is NULL or a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> FfiResult<&'a str> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Fail(QrStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', "\\0")).map_or(ptr::null_mut(), CString::into_raw)
}

fn prime(k: i64) -> FfiResult<PrimeK> {
    Ok(PrimeK::new(k)?)
}

/// Boxes `value` into a handle; nothing is allocated when `out` is NULL.
///
/// # Safety
/// `out` is NULL or valid for a pointer write.
unsafe fn write_handle<T>(out: *mut *mut T, value: T) -> FfiResult<()> {
    if out.is_null() {
        return Err(null("out"));
    }
    out.write(Box::into_raw(Box::new(value)));
    Ok(())
}

// ---------------------------------------------------------------------------
// Library-level helpers

/// The library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or NULL if the last call
/// succeeded.  The pointer stays valid until the next library call on the
/// same thread.
#[no_mangle]
pub extern "C" fn qr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` is NULL or a pointer returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------------------------------------------------------------------------
// Manifolds

/// Creates the lens space `L(p, q)`.
///
/// # Safety
/// `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_manifold_lens(p: i64, q: i64, out: *mut *mut QrManifold) -> QrStatus {
    guard(|| {
        let m = ManifoldSpec::Lens { p, q };
        m.validate()?;
        write_handle(out, QrManifold(m))
    })
}

/// Creates the Seifert space with exceptional fibres `p[j]/q[j]`,
/// `j < len`.
///
/// # Safety
/// `p` and `q` point to `len` readable integers; `out` is valid for a
/// pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_manifold_seifert(
    p: *const i64,
    q: *const i64,
    len: usize,
    out: *mut *mut QrManifold,
) -> QrStatus {
    guard(|| {
        if len > 0 && (p.is_null() || q.is_null()) {
            return Err(null("fibre array"));
        }
        let fractions = if len == 0 {
            Vec::new()
        } else {
            let ps = std::slice::from_raw_parts(p, len);
            let qs = std::slice::from_raw_parts(q, len);
            ps.iter().copied().zip(qs.iter().copied()).collect()
        };
        let m = ManifoldSpec::Seifert { fractions };
        m.validate()?;
        write_handle(out, QrManifold(m))
    })
}

/// Creates a manifold from its JSON description, e.g.
/// `{"type":"lens","p":5,"q":2}`.
///
/// # Safety
/// `json` is a NUL-terminated string; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_manifold_from_json(json: *const c_char, out: *mut *mut QrManifold) -> QrStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let m: ManifoldSpec = serde_json::from_str(text)
            .map_err(|e| Fail(QrStatus::InvalidSpec, format!("invalid manifold JSON: {e}")))?;
        m.validate()?;
        write_handle(out, QrManifold(m))
    })
}

/// Human-readable identifier such as `L(5,2)`; free with
/// [`qr_string_free`].  Returns NULL if `m` is NULL.
///
/// # Safety
/// `m` is NULL or a live manifold handle.
#[no_mangle]
pub unsafe extern "C" fn qr_manifold_id(m: *const QrManifold) -> *mut c_char {
    m.as_ref().map_or(ptr::null_mut(), |m| into_c_string(m.0.id()))
}

/// `|H₁(M; ℤ)|`.
///
/// # Safety
/// `m` is a live manifold handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qr_manifold_h1_order(m: *const QrManifold, out: *mut u64) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        write_out(out, nt::h1_order(&m.0)?, "out")
    })
}

/// Releases a manifold handle.
///
/// # Safety
/// `m` is NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_manifold_free(m: *mut QrManifold) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

// ---------------------------------------------------------------------------
// Invariants

/// The exact normalised invariant `Z′(M; k)` at the odd prime `k`.
///
/// # Safety
/// `m` is a live manifold handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_zprime_exact(m: *const QrManifold, k: i64, out: *mut *mut QrCycInt) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        let z = ohtsuki::zprime_exact(&m.0, prime(k)?, &JonesRegistry::new())?;
        write_handle(out, QrCycInt(z))
    })
}

/// Numeric `Z′(M; k)` from the surgery oracle.
///
/// # Safety
/// `m` is a live manifold handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qr_zprime_numeric(m: *const QrManifold, k: i64, out: *mut QrComplex) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        let z = surgery::zprime_numeric(&m.0, prime(k)?, Precision::Compensated)?;
        write_out(out, QrComplex { re: z.re, im: z.im }, "out")
    })
}

/// Numeric unnormalised SO(3) invariant `Z(M; k)` for any odd `k ≥ 3`.
///
/// # Safety
/// `m` is a live manifold handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qr_z_numeric(m: *const QrManifold, k: i64, out: *mut QrComplex) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        let z = surgery::z_numeric(&m.0, k, Precision::Compensated)?;
        write_out(out, QrComplex { re: z.re, im: z.im }, "out")
    })
}

/// Number of stored coefficients: the value is
/// `Σ_{i < len} c_i q̌^i`.
///
/// # Safety
/// `c` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_cycint_len(c: *const QrCycInt) -> usize {
    c.as_ref().map_or(0, |c| c.0.coeffs().len())
}

/// The modulus `K` of the element, or 0 for NULL.
///
/// # Safety
/// `c` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_cycint_modulus(c: *const QrCycInt) -> i64 {
    c.as_ref().map_or(0, |c| c.0.modulus().get())
}

/// Coefficient `i` as a decimal string; free with [`qr_string_free`].
///
/// # Safety
/// `c` is a live handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_cycint_coeff(c: *const QrCycInt, i: usize, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let c = borrow(c, "element")?;
        let coeff = c.0.coeffs().get(i).ok_or_else(|| {
            Fail(
                QrStatus::OutOfRange,
                format!("coefficient index {i} ≥ {}", c.0.coeffs().len()),
            )
        })?;
        write_out(out, into_c_string(coeff.to_string()), "out")
    })
}

/// Polynomial rendering in `q̌`; free with [`qr_string_free`].
///
/// # Safety
/// `c` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_cycint_to_string(c: *const QrCycInt) -> *mut c_char {
    c.as_ref().map_or(ptr::null_mut(), |c| into_c_string(c.0.to_poly_string()))
}

/// Complex value at `q̌ = e^{2πi/K}`.
///
/// # Safety
/// `c` is a live handle; `out` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qr_cycint_eval(c: *const QrCycInt, out: *mut QrComplex) -> QrStatus {
    guard(|| {
        let c = borrow(c, "element")?;
        let z = c.0.eval_complex(Precision::Compensated);
        write_out(out, QrComplex { re: z.re, im: z.im }, "out")
    })
}

/// Releases an element handle.
///
/// # Safety
/// `c` is NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_cycint_free(c: *mut QrCycInt) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

// ---------------------------------------------------------------------------
// λ-series and the identity check

/// Closed-form `λ₀..λ_{n_max}` (lens spaces, Seifert spaces, unknot/unlink
/// surgeries).
///
/// # Safety
/// `m` is a live manifold handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_lambda_closed_form(
    m: *const QrManifold,
    n_max: usize,
    out: *mut *mut QrLambda,
) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        let l = ohtsuki::lambda_closed_form(&m.0, n_max)?;
        write_handle(out, QrLambda(l))
    })
}

/// `λ₀..λ_{n_max}` reconstructed from exact invariants at the given primes
/// (extended automatically when more are needed).
///
/// # Safety
/// `primes` points to `len` readable integers; `m` is a live handle; `out`
/// is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_lambda_reconstruct(
    m: *const QrManifold,
    primes: *const i64,
    len: usize,
    n_max: usize,
    out: *mut *mut QrLambda,
) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        if primes.is_null() {
            return Err(null("primes"));
        }
        let ks = std::slice::from_raw_parts(primes, len)
            .iter()
            .map(|&k| prime(k))
            .collect::<FfiResult<Vec<_>>>()?;
        let r = ohtsuki::reconstruct_lambda(&m.0, &ks, n_max, &ReconstructOptions::default(), &JonesRegistry::new())?;
        write_handle(out, QrLambda(r.as_lambda_series()))
    })
}

/// Number of coefficients held (`n_max + 1`), or 0 for NULL.
///
/// # Safety
/// `l` is NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qr_lambda_len(l: *const QrLambda) -> usize {
    l.as_ref().map_or(0, |l| l.0.lambda.len())
}

/// `λ_n` as a reduced fraction `"a/b"` (or `"a"` when integral); free with
/// [`qr_string_free`].
///
/// # Safety
/// `l` is a live handle; `out` is valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn qr_lambda_coeff(l: *const QrLambda, n: usize, out: *mut *mut c_char) -> QrStatus {
    guard(|| {
        let l = borrow(l, "lambda")?;
        let v = l.0.lambda.get(n).ok_or_else(|| {
            Fail(
                QrStatus::OutOfRange,
                format!("λ index {n} > n_max = {}", l.0.lambda.len().saturating_sub(1)),
            )
        })?;
        write_out(out, into_c_string(v.to_string()), "out")
    })
}

/// Releases a λ-series handle.
///
/// # Safety
/// `l` is NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qr_lambda_free(l: *mut QrLambda) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Checks `diamond(|H₁|·(|H₁|/K)·Z′) = vee(Σ λₙ xⁿ)` at the prime `k`
/// using the closed-form λ-series.  `*equal` receives the verdict when the
/// status is `Ok`; a prime outside the hypotheses yields
/// `H1DivisibleByK`/`PDivisibleByK`.
///
/// # Safety
/// `m` is a live manifold handle; `equal` is valid for a write.
#[no_mangle]
pub unsafe extern "C" fn qr_verify_identity(m: *const QrManifold, k: i64, equal: *mut bool) -> QrStatus {
    guard(|| {
        let m = borrow(m, "manifold")?;
        let k = prime(k)?;
        let report = ohtsuki::verify_identity(&m.0, &[k], LambdaSource::ClosedForm, &JonesRegistry::new())
            .pop()
            .expect("one report per prime");
        let verdict = match report.verdict {
            Verdict::Equal => true,
            Verdict::Unequal => false,
            Verdict::Skipped(msg) => {
                let h1 = nt::h1_order(&m.0)?;
                let status = if h1 % k.get() as u64 == 0 {
                    QrStatus::H1DivisibleByK
                } else {
                    QrStatus::PDivisibleByK
                };
                return Err(Fail(status, msg));
            }
            Verdict::Error(msg) => return Err(Fail(QrStatus::ComputationFailed, msg)),
        };
        write_out(equal, verdict, "equal")
    })
}
