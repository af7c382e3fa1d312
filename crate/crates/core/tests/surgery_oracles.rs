// SPDX-License-Identifier: MIT OR Apache-2.0

//! Numeric surgery evaluation and exact closed forms against independent
//! oracles: a brute-force colour sum over chain presentations built here,
//! homeomorphisms of lens spaces, and cross-family identifications.

mod common;

use common::{coprime, lens_rt_brute_force, pk, rt_brute_force};
use num_complex::Complex64;
use proptest::prelude::*;
use quantum_rhs::closedform::{lens_zprime, seifert_zprime};
use quantum_rhs::cyclotomic::Precision;
use quantum_rhs::jones::JonesRegistry;
use quantum_rhs::nt::SeifertData;
use quantum_rhs::ohtsuki::{seifert_family, zprime_exact};
use quantum_rhs::surgery::{
    exact_p1, kirby_melvin_check, z_numeric, zprime_numeric, PlumbingGraph,
};
use quantum_rhs::{CycInt, Error, ManifoldSpec};

const TOL: f64 = 1e-9;

fn lens(p: i64, q: i64) -> ManifoldSpec {
    ManifoldSpec::Lens { p, q }
}

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= TOL * (1.0 + b.norm())
}

fn inverse_mod(q: i64, p: i64) -> i64 {
    let p = p.abs();
    (1..p).find(|&x| (q * x).rem_euclid(p) == 1).expect("coprime")
}

#[test]
fn tree_evaluation_matches_brute_force_on_chains() {
    for (p, q) in [(2, 1), (3, 1), (5, 2), (7, 3), (-5, 2), (8, 3), (-7, 2)] {
        for k in [3, 5, 7, 9, 11] {
            let z = z_numeric(&lens(p, q), k, Precision::Compensated).unwrap();
            let oracle = lens_rt_brute_force(p, q, k);
            assert!(close(z, oracle), "L({p},{q}) k={k}: {z} vs {oracle}");
        }
    }
}

#[test]
fn tree_evaluation_matches_brute_force_on_stars() {
    for fr in [vec![(2, 1), (3, 1), (5, -4)], vec![(3, 1), (4, 1), (5, 1)], vec![(3, 2), (5, 3)]] {
        let s = SeifertData::new(fr.clone()).unwrap();
        let g = PlumbingGraph::seifert(&s).unwrap();
        for k in [5, 7] {
            let z = g.rt_value(k, Precision::Compensated);
            let oracle = rt_brute_force(&g.framings, &g.edges, k);
            assert!(close(z, oracle), "{fr:?} k={k}");
        }
    }
}

#[test]
fn unit_framed_unknot_is_the_sphere() {
    for k in [3, 5, 7, 9, 11, 13] {
        for f in [1, -1] {
            let z = rt_brute_force(&[f], &[], k);
            assert!(close(z, Complex64::new(1.0, 0.0)), "framing {f}, k={k}: {z}");
        }
    }
}

#[test]
fn blow_up_invariance() {
    // Inserting a ±1-framed unknot between two chain vertices and shifting
    // their framings by ∓1 gives the same manifold.
    let k = 7;
    let base = rt_brute_force(&[-3, -2], &[(0, 1)], k);
    let blown = rt_brute_force(&[-4, -1, -3], &[(0, 1), (1, 2)], k);
    assert!(close(base, blown), "{base} vs {blown}");
}

#[test]
fn lens_space_homeomorphisms() {
    // L(p,q) ≅ L(p,q*) (qq* ≡ 1) and L(p,q) ≅ L(p,q+p) preserve orientation;
    // L(p,−q) is the mirror, whose invariant is the complex conjugate.
    for p in [5i64, 7, 8, 11] {
        for q in 1..p {
            if !coprime(p, q) {
                continue;
            }
            for k in [5, 7, 9] {
                let z = z_numeric(&lens(p, q), k, Precision::Compensated).unwrap();
                let zi = z_numeric(&lens(p, inverse_mod(q, p)), k, Precision::Compensated).unwrap();
                let zs = z_numeric(&lens(p, q + p), k, Precision::Compensated).unwrap();
                let zm = z_numeric(&lens(p, -q), k, Precision::Compensated).unwrap();
                assert!(close(z, zi), "L({p},{q}) vs q* at k={k}");
                assert!(close(z, zs), "L({p},{q}) vs q+p at k={k}");
                assert!(close(zm, z.conj()), "mirror of L({p},{q}) at k={k}");
            }
        }
    }
}

#[test]
fn kirby_melvin_factorisation() {
    for p in -8i64..=8 {
        for q in 1..p.abs().max(2) {
            if p.abs() < 2 || !coprime(p, q) {
                continue;
            }
            for kk in [5, 7, 11, 13] {
                if p % kk == 0 {
                    continue;
                }
                let r = kirby_melvin_check(&lens(p, q), pk(kk), TOL).unwrap();
                assert!(r.ok, "L({p},{q}) K={kk}: residual {}", r.residual);
            }
        }
    }
    let s = ManifoldSpec::sphere();
    assert!(kirby_melvin_check(&s, pk(7), TOL).unwrap().ok);
}

#[test]
fn lens_closed_form_matches_numeric_oracle() {
    for p in -12i64..=12 {
        if p.abs() < 2 {
            continue;
        }
        for q in 1..p.abs() {
            if !coprime(p, q) {
                continue;
            }
            for kk in [5, 7, 11, 13] {
                if p % kk == 0 {
                    continue;
                }
                let k = pk(kk);
                let exact = lens_zprime(p, q, k).unwrap().eval_complex(Precision::Compensated);
                let numeric = zprime_numeric(&lens(p, q), k, Precision::Compensated).unwrap();
                assert!(close(exact, numeric), "L({p},{q}) K={kk}: {exact} vs {numeric}");
            }
        }
    }
}

#[test]
fn seifert_closed_form_matches_numeric_oracle() {
    let reg = JonesRegistry::new();
    for m in seifert_family() {
        for kk in [7, 11, 13] {
            let k = pk(kk);
            match zprime_exact(&m, k, &reg) {
                Ok(z) => {
                    let exact = z.eval_complex(Precision::Compensated);
                    let numeric = zprime_numeric(&m, k, Precision::Compensated).unwrap();
                    assert!(close(exact, numeric), "{m} K={kk}: {exact} vs {numeric}");
                }
                Err(Error::H1DivisibleByK { .. } | Error::PDivisibleByK { .. }) => {}
                Err(e) => panic!("{m} K={kk}: {e}"),
            }
        }
    }
}

#[test]
fn single_fibre_seifert_is_a_lens_space() {
    // A 0-framed unknot clasped to a p/q-surgered unknot slam-dunks to
    // −q/p surgery, i.e. X(p/q) ≅ L(q, p).
    for (p, q) in [(3, 2), (5, 2), (2, 5), (7, 3), (3, -7), (4, 9)] {
        for kk in [7, 11, 13] {
            let k = pk(kk);
            if p % kk == 0 || q % kk == 0 {
                continue;
            }
            let s = SeifertData::new(vec![(p, q)]).unwrap();
            let exact = seifert_zprime(&s, k).unwrap();
            assert_eq!(exact, lens_zprime(q, p, k).unwrap(), "X({p}/{q}) K={kk}");
            let zs = z_numeric(&ManifoldSpec::Seifert { fractions: vec![(p, q)] }, kk, Precision::Compensated).unwrap();
            let zl = z_numeric(&lens(q, p), kk, Precision::Compensated).unwrap();
            assert!(close(zs, zl), "X({p}/{q}) vs L({q},{p}) at K={kk}");
        }
    }
}

#[test]
fn unknot_surgery_exact_path_matches_lens_closed_form() {
    let reg = JonesRegistry::new();
    for p in -8i64..=8 {
        if p == 0 {
            continue;
        }
        for kk in [5, 7, 11] {
            let k = pk(kk);
            let m = ManifoldSpec::P1 { jones: "unknot".into(), framings: vec![p] };
            if p % kk == 0 {
                assert!(matches!(exact_p1(&m, k, &reg), Err(Error::H1DivisibleByK { .. })));
                continue;
            }
            let exact = exact_p1(&m, k, &reg).unwrap();
            let expected = if p.abs() == 1 { CycInt::one(k) } else { lens_zprime(-p, 1, k).unwrap() };
            assert_eq!(exact, expected, "({p}) surgery at K={kk}");
            let numeric = zprime_numeric(&m, k, Precision::Compensated).unwrap();
            assert!(close(exact.eval_complex(Precision::Compensated), numeric));
        }
    }
}

#[test]
fn unlink_surgery_is_a_connected_sum() {
    let reg = JonesRegistry::new();
    for kk in [5, 7] {
        let k = pk(kk);
        let m = ManifoldSpec::P1 { jones: "unlink".into(), framings: vec![2, -3] };
        let exact = exact_p1(&m, k, &reg).unwrap();
        let expected = &lens_zprime(-2, 1, k).unwrap() * &lens_zprime(3, 1, k).unwrap();
        assert_eq!(exact, expected, "K={kk}");
    }
}

#[test]
fn empty_and_trivial_surgeries() {
    let reg = JonesRegistry::new();
    let k = pk(7);
    let empty = ManifoldSpec::P1 { jones: "unlink".into(), framings: vec![] };
    assert!(exact_p1(&empty, k, &reg).map(|z| z.is_one()).unwrap_or(false));
    let s3 = ManifoldSpec::P1 { jones: "unknot".into(), framings: vec![1] };
    assert!(exact_p1(&s3, k, &reg).unwrap().is_one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn presentation_independence(p in 2i64..14, q in 1i64..14, t in 1i64..3, kk in prop::sample::select(vec![5i64, 7, 11, 13])) {
        prop_assume!(q < p && coprime(p, q) && p % kk != 0);
        let k = pk(kk);
        let a = zprime_numeric(&lens(p, q), k, Precision::Compensated).unwrap();
        let b = zprime_numeric(&lens(p, q + t * p), k, Precision::Compensated).unwrap();
        prop_assert!(close(a, b));
    }

    #[test]
    fn exact_lens_values_have_unit_modulus_scaled(p in 2i64..30, q in 1i64..30, kk in prop::sample::select(vec![5i64, 7, 11, 13, 17])) {
        prop_assume!(q < p && coprime(p, q) && p % kk != 0);
        // |Z′(L(p,q))| = |sin(π p*/K)/sin(π/K)| for the representative p* ∈ [0, K).
        let k = pk(kk);
        let z = lens_zprime(p, q, k).unwrap().eval_complex(Precision::Compensated);
        let ps = k.inv(p).unwrap();
        let expect = ((std::f64::consts::PI * ps as f64 / kk as f64).sin()
            / (std::f64::consts::PI / kk as f64).sin()).abs();
        prop_assert!((z.norm() - expect).abs() < 1e-9);
    }
}
