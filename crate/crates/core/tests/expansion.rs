// SPDX-License-Identifier: MIT OR Apache-2.0

//! Structural bounds on the small-`h` expansion of coloured Jones data, and
//! the truncated series against direct trigonometric evaluation.

use quantum_rhs::jones::{expansion_check, expansion_numeric, ExpansionSubject};
use quantum_rhs::Error;

fn unknot_trig(a: f64, k: f64) -> f64 {
    let t = std::f64::consts::PI / k;
    (a * t).sin() / (a * t.sin())
}

fn seifert_trig(ps: &[i64], beta: f64, k: f64) -> f64 {
    let t = std::f64::consts::PI / k;
    let num: f64 = ps.iter().map(|&p| (t * beta / p as f64).sin()).product();
    num / (t.sin() * (t * beta).sin().powi(ps.len() as i32 - 1)) / beta
}

#[test]
fn unknot_bounds_to_order_8() {
    let r = expansion_check(&ExpansionSubject::Unknot, 8).unwrap();
    assert_eq!(r.n_max, 8);
    // degree in α² at hⁿ is at most 3n/4 and at least one term per even n
    for (n, &m) in r.max_m.iter().enumerate() {
        assert!(4 * m <= 3 * n, "n={n} m={m}");
    }
    assert!(r.monomials >= 5);
}

#[test]
fn seifert_fibre_bounds_to_order_6() {
    for ps in [vec![2, 3, 5], vec![3, 4, 5], vec![2, 3, 7]] {
        let r = expansion_check(&ExpansionSubject::SeifertFibre(ps.clone()), 6).unwrap();
        assert!(r.monomials > 0, "{ps:?}");
    }
}

#[test]
fn unlink_and_empty() {
    assert!(expansion_check(&ExpansionSubject::Unlink(3), 6).is_ok());
    let e = expansion_check(&ExpansionSubject::Empty, 4).unwrap();
    assert_eq!(e.monomials, 1);
    assert!(matches!(
        expansion_check(&ExpansionSubject::SeifertFibre(vec![2, 0]), 4),
        Err(Error::InvalidSpec(_))
    ));
}

#[test]
fn truncated_series_matches_trigonometry() {
    // With θ = π/K small the truncation error is O((αθ)^{n+2}).
    let k = 400.0;
    for a in [1.0, 3.0, 7.0] {
        let v = expansion_numeric(&ExpansionSubject::Unknot, 10, &[a], k).unwrap();
        assert!((v - unknot_trig(a, k)).abs() < 1e-12, "α={a}");
    }
    for beta in [1.0, 5.0, 11.0] {
        let ps = [2, 3, 5];
        let v = expansion_numeric(&ExpansionSubject::SeifertFibre(ps.to_vec()), 10, &[beta], k).unwrap();
        let t = seifert_trig(&ps, beta, k);
        assert!((v - t).abs() < 1e-10 * t.abs().max(1.0), "β={beta}: {v} vs {t}");
    }
}
