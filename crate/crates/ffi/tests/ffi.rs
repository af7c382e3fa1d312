// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exercises the C ABI from Rust, and compiles a C program against the
//! generated header.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use quantum_rhs_ffi::*;

fn take_string(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { qr_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let p = qr_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn lens(p: i64, q: i64) -> *mut QrManifold {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qr_manifold_lens(p, q, &mut m) }, QrStatus::Ok);
    m
}

fn lambda_strings(l: *const QrLambda) -> Vec<String> {
    (0..unsafe { qr_lambda_len(l) })
        .map(|n| {
            let mut s = ptr::null_mut();
            assert_eq!(unsafe { qr_lambda_coeff(l, n, &mut s) }, QrStatus::Ok);
            take_string(s)
        })
        .collect()
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(qr_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn manifold_ids_and_h1() {
    let m = lens(5, 2);
    assert_eq!(take_string(unsafe { qr_manifold_id(m) }), "L(5,2)");
    let mut h1 = 0u64;
    assert_eq!(unsafe { qr_manifold_h1_order(m, &mut h1) }, QrStatus::Ok);
    assert_eq!(h1, 5);
    unsafe { qr_manifold_free(m) };

    let (p, q) = ([2i64, 3, 5], [1i64, 1, -4]);
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { qr_manifold_seifert(p.as_ptr(), q.as_ptr(), 3, &mut s) },
        QrStatus::Ok
    );
    // e = Σ q/p = 1/2 + 1/3 − 4/5 = 1/30, so |H₁| = 30·|e| = 1.
    assert_eq!(unsafe { qr_manifold_h1_order(s, &mut h1) }, QrStatus::Ok);
    assert_eq!(h1, 1);
    unsafe { qr_manifold_free(s) };
}

#[test]
fn json_constructor_matches_direct_constructor() {
    let json = CString::new(r#"{"type":"lens","p":7,"q":3}"#).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qr_manifold_from_json(json.as_ptr(), &mut m) }, QrStatus::Ok);
    assert_eq!(take_string(unsafe { qr_manifold_id(m) }), "L(7,3)");
    unsafe { qr_manifold_free(m) };
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { qr_manifold_lens(4, 2, &mut m) }, QrStatus::InvalidSpec);
    assert!(m.is_null());
    assert!(last_error().is_some());

    assert_eq!(unsafe { qr_manifold_lens(0, 1, &mut m) }, QrStatus::NotRhs);

    let bad = CString::new("{not json").unwrap();
    assert_eq!(unsafe { qr_manifold_from_json(bad.as_ptr(), &mut m) }, QrStatus::InvalidSpec);
    assert_eq!(unsafe { qr_manifold_from_json(ptr::null(), &mut m) }, QrStatus::NullPointer);
    assert_eq!(unsafe { qr_manifold_lens(3, 1, ptr::null_mut()) }, QrStatus::NullPointer);

    let m = lens(3, 1);
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { qr_zprime_exact(m, 9, &mut z) }, QrStatus::NotPrime);
    assert_eq!(unsafe { qr_zprime_exact(m, 3, &mut z) }, QrStatus::H1DivisibleByK);
    let mut equal = false;
    assert_eq!(unsafe { qr_verify_identity(m, 3, &mut equal) }, QrStatus::H1DivisibleByK);

    // A successful call clears the message.
    assert_eq!(unsafe { qr_zprime_exact(m, 5, &mut z) }, QrStatus::Ok);
    assert!(last_error().is_none());
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { qr_cycint_coeff(z, 1000, &mut s) }, QrStatus::OutOfRange);
    unsafe {
        qr_cycint_free(z);
        qr_manifold_free(m);
    }

    let unsupported = CString::new(r#"{"type":"p1","jones":"unknot","framings":[5]}"#).unwrap();
    let mut p1 = ptr::null_mut();
    assert_eq!(unsafe { qr_manifold_from_json(unsupported.as_ptr(), &mut p1) }, QrStatus::Ok);
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { qr_lambda_closed_form(p1, 3, &mut l) }, QrStatus::Ok);
    unsafe {
        qr_lambda_free(l);
        qr_manifold_free(p1);
    }
}

#[test]
fn null_handles_are_tolerated() {
    unsafe {
        qr_manifold_free(ptr::null_mut());
        qr_cycint_free(ptr::null_mut());
        qr_lambda_free(ptr::null_mut());
        qr_string_free(ptr::null_mut());
        assert_eq!(qr_cycint_len(ptr::null()), 0);
        assert_eq!(qr_lambda_len(ptr::null()), 0);
        assert!(qr_manifold_id(ptr::null()).is_null());
    }
}

#[test]
fn sphere_invariant_is_one() {
    let m = lens(1, 0);
    let mut z = ptr::null_mut();
    assert_eq!(unsafe { qr_zprime_exact(m, 5, &mut z) }, QrStatus::Ok);
    assert_eq!(take_string(unsafe { qr_cycint_to_string(z) }), "1");
    let mut v = QrComplex::default();
    assert_eq!(unsafe { qr_cycint_eval(z, &mut v) }, QrStatus::Ok);
    assert!((v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    unsafe {
        qr_cycint_free(z);
        qr_manifold_free(m);
    }
}

/// The exact value, read back coefficient by coefficient and evaluated here
/// at `e^{2πi/K}`, agrees with the numeric surgery oracle.
#[test]
fn exact_coefficients_agree_with_numeric_oracle() {
    for (p, q, k) in [(3, 1, 7), (5, 2, 7), (7, 3, 11), (-5, 1, 13)] {
        let m = lens(p, q);
        let mut z = ptr::null_mut();
        assert_eq!(unsafe { qr_zprime_exact(m, k, &mut z) }, QrStatus::Ok);
        assert_eq!(unsafe { qr_cycint_modulus(z) }, k);
        let (mut re, mut im) = (0.0f64, 0.0f64);
        for i in 0..unsafe { qr_cycint_len(z) } {
            let mut s = ptr::null_mut();
            assert_eq!(unsafe { qr_cycint_coeff(z, i, &mut s) }, QrStatus::Ok);
            let c: f64 = take_string(s).parse().unwrap();
            let t = std::f64::consts::TAU * i as f64 / k as f64;
            re += c * t.cos();
            im += c * t.sin();
        }
        let mut num = QrComplex::default();
        assert_eq!(unsafe { qr_zprime_numeric(m, k, &mut num) }, QrStatus::Ok);
        assert!(
            (re - num.re).hypot(im - num.im) < 1e-9,
            "L({p},{q}) K={k}: exact {re}+{im}i vs numeric {:?}",
            num
        );
        unsafe {
            qr_cycint_free(z);
            qr_manifold_free(m);
        }
    }
}

#[test]
fn unnormalised_sphere_value() {
    // Z(S³; k) for the SO(3) normalisation is 1 at every odd level.
    let m = lens(1, 0);
    for k in [3, 5, 9, 15] {
        let mut v = QrComplex::default();
        assert_eq!(unsafe { qr_z_numeric(m, k, &mut v) }, QrStatus::Ok);
        assert!((v.re - 1.0).abs() < 1e-9 && v.im.abs() < 1e-9, "k={k}: {v:?}");
    }
    unsafe { qr_manifold_free(m) };
}

#[test]
fn lambda_l21_closed_form_and_reconstruction() {
    let m = lens(2, 1);
    let mut l = ptr::null_mut();
    assert_eq!(unsafe { qr_lambda_closed_form(m, 3, &mut l) }, QrStatus::Ok);
    let closed = lambda_strings(l);
    assert_eq!(closed, ["1", "0", "-1/32", "1/32"]);
    unsafe { qr_lambda_free(l) };

    let primes = [7i64, 11, 13, 17, 19];
    assert_eq!(
        unsafe { qr_lambda_reconstruct(m, primes.as_ptr(), primes.len(), 3, &mut l) },
        QrStatus::Ok
    );
    assert_eq!(lambda_strings(l), closed);
    unsafe {
        qr_lambda_free(l);
        qr_manifold_free(m);
    }
}

#[test]
fn identity_holds_for_small_lens_spaces() {
    for (p, q) in [(2, 1), (3, 1), (5, 2), (-7, 3)] {
        let m = lens(p, q);
        for k in [5, 11, 13] {
            let mut equal = false;
            let st = unsafe { qr_verify_identity(m, k, &mut equal) };
            if (p as i64).rem_euclid(k) == 0 {
                assert_eq!(st, QrStatus::H1DivisibleByK);
            } else {
                assert_eq!(st, QrStatus::Ok, "{:?}", last_error());
                assert!(equal, "L({p},{q}) at K={k}");
            }
        }
        unsafe { qr_manifold_free(m) };
    }
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps/
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let lib = target_dir().join("libquantum_rhs_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if !lib.exists() || Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("skipping: static library or C compiler not available");
        return;
    }
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = std::env::temp_dir().join(format!("quantum_rhs_smoke_{}", std::process::id()));
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&out)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).output().unwrap();
    let _ = std::fs::remove_file(&out);
    assert!(
        run.status.success(),
        "C smoke test failed:\n{}{}",
        String::from_utf8_lossy(&run.stdout),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
