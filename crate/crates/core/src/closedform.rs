// SPDX-License-Identifier: MIT OR Apache-2.0

//! Closed forms for lens spaces and Seifert fibred spaces: `Z′` in ℤ[q̌] and
//! the Ohtsuki series as rational power series in `x = q − 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{legendre, PrimeK};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::nt::{dedekind_sum, dedekind_vee, SeifertData};
use crate::series::{
    double_factorial_odd, log1p, q_power, rat, s_add, s_div, s_mul, sinc_series, sinh_ratio, vee,
    LambdaSeries, RatSeries,
};
use crate::surgery::ExtendedPhase;

/// `Σ_{j<n} q̌^{2*(n−1−2j)}`, the quantum integer `[n]` in `y = q̌^{2*}`.
fn quantum_integer(n: i64, k: PrimeK) -> CycInt {
    let kk = k.get();
    let two = k.inv2();
    let mut counts = vec![0i64; kk as usize];
    for j in 0..n {
        counts[k.reduce(two * k.reduce(n - 1 - 2 * j)) as usize] += 1;
    }
    CycInt::from_exponent_counts(k, &counts)
}

fn check_p(p: i64, k: PrimeK) -> Result<()> {
    if k.reduce(p) == 0 {
        return Err(Error::PDivisibleByK { p, k: k.get() });
    }
    Ok(())
}

/// `Z′(L(p,q); k) = (|p|/K)·sgn(p)·q̌^{(3s(q,p))^∨}·[p*]`, `p* ∈ [0, K)`.
pub fn lens_zprime(p: i64, q: i64, k: PrimeK) -> Result<CycInt> {
    if p == 0 {
        return Err(Error::NotRhs(format!("L({p},{q})")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    // For a lens space |H₁| = |p|, so this is the homology condition.
    if k.reduce(p) == 0 {
        return Err(Error::H1DivisibleByK { h1: p.abs(), k: k.get() });
    }
    let s3 = dedekind_vee(q, p, k)?.value * 3;
    let p_star = k.inv(p)?;
    let f = quantum_integer(p_star, k).mul_qpow(s3);
    let sign = legendre(p.abs(), k) * p.signum();
    Ok(f.scale(&BigInt::from(sign)))
}

/// `λ(L(p,q)) = p·q^{3s(q,p)}·(q^{1/(2p)} − q^{−1/(2p)})/(q^{1/2} − q^{−1/2})`.
pub fn lens_lambda_series(p: i64, q: i64, d: usize) -> Result<LambdaSeries> {
    if p == 0 {
        return Err(Error::NotRhs(format!("L({p},{q})")));
    }
    let s3 = dedekind_sum(q, p)? * BigRational::from_integer(BigInt::from(3));
    let series = s_mul(&q_power(&s3, d), &sinh_ratio(&rat(1, p), d)).scale(&rat(p, 1));
    LambdaSeries::closed_form(format!("L({p},{q})"), series)
}

/// Expansion coefficients `C_n` of `Π_j (z^{−a_j} − z^{a_j}) / (z^{−1} − z)^{N−1}
/// = Σ_{n>0} C_n (z^{−n} − z^{n})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnTable {
    pub a: Vec<i64>,
    pub c: BTreeMap<i64, BigInt>,
}

type Laurent = BTreeMap<i64, BigInt>;

fn laurent_mul(x: &Laurent, y: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (ea, ca) in x {
        for (eb, cb) in y {
            *out.entry(ea + eb).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn laurent_binomial(a: i64) -> Laurent {
    let mut l = Laurent::new();
    *l.entry(-a).or_insert_with(BigInt::zero) += 1;
    *l.entry(a).or_insert_with(BigInt::zero) -= 1;
    l.retain(|_, c| !c.is_zero());
    l
}

impl CnTable {
    /// Computes the table for `a_j ≥ 1` by expanding
    /// `Π_{j<N}[a_j]·(y^{−a_N} − y^{a_N})`, and verifies the defining identity
    /// by multiplying back.
    pub fn new(a: &[i64]) -> Result<Self> {
        if a.is_empty() || a.iter().any(|&x| x < 1) {
            return Err(Error::InvalidSpec(format!("C_n needs a_j ≥ 1, got {a:?}")));
        }
        let mut poly = Laurent::from([(0, BigInt::one())]);
        for &aj in &a[..a.len() - 1] {
            let qi: Laurent = (0..aj).map(|j| (aj - 1 - 2 * j, BigInt::one())).collect();
            poly = laurent_mul(&poly, &qi);
        }
        poly = laurent_mul(&poly, &laurent_binomial(a[a.len() - 1]));
        let mut c = BTreeMap::new();
        for (&e, v) in &poly {
            if e < 0 {
                c.insert(-e, v.clone());
            }
            let mirror = poly.get(&-e).cloned().unwrap_or_default();
            if mirror != -v {
                return Err(Error::IntegralityFailure(format!(
                    "C_n expansion is not antisymmetric at exponent {e}"
                )));
            }
        }
        let table = CnTable { a: a.to_vec(), c };
        table.verify()?;
        Ok(table)
    }

    /// `Σ C_n(z^{−n} − z^n)·(z^{−1} − z)^{N−1} = Π(z^{−a_j} − z^{a_j})`.
    pub fn verify(&self) -> Result<()> {
        let mut lhs = Laurent::new();
        for (&n, v) in &self.c {
            for (e, b) in laurent_binomial(n) {
                *lhs.entry(e).or_insert_with(BigInt::zero) += v * b;
            }
        }
        lhs.retain(|_, c| !c.is_zero());
        for _ in 1..self.a.len() {
            lhs = laurent_mul(&lhs, &laurent_binomial(1));
        }
        let mut rhs = Laurent::from([(0, BigInt::one())]);
        for &aj in &self.a {
            rhs = laurent_mul(&rhs, &laurent_binomial(aj));
        }
        if lhs != rhs {
            return Err(Error::IntegralityFailure("C_n identity failed".into()));
        }
        Ok(())
    }
}

/// The data the Seifert closed form needs at a given `K`.
struct SeifertAtK {
    p: i64,
    h: i64,
    sigma: i64,
    /// `Σ_n C_n q̌^{4*·PH*·(n²+1)}·[PH*·n]`.
    sum: CycInt,
}

fn seifert_at_k(s: &SeifertData, k: PrimeK) -> Result<SeifertAtK> {
    let p = s.p_product()?;
    let h = s.h()?;
    for &(pj, _) in &s.fractions {
        check_p(pj, k)?;
    }
    if k.reduce(h) == 0 {
        return Err(Error::H1DivisibleByK { h1: h.abs(), k: k.get() });
    }
    let sigma = s.sigma()?;
    let a: Vec<i64> = s
        .fractions
        .iter()
        .map(|&(pj, _)| k.inv(pj))
        .collect::<Result<_>>()?;
    let table = CnTable::new(&a)?;
    let ph_star = k.reduce(k.reduce(p) * k.inv(h)?);
    let four = k.inv4();
    let mut sum = CycInt::zero(k);
    for (&n, c) in &table.c {
        let m = k.reduce(ph_star * k.reduce(n));
        let e = k.reduce(four * ph_star % k.get() * k.reduce(n * n + 1));
        let term = quantum_integer(m, k).mul_qpow(e).scale(c);
        sum = &sum + &term;
    }
    Ok(SeifertAtK {
        p,
        h,
        sigma,
        sum,
    })
}

/// The q̌-exponent `4*(P*H − 3σ) − Σ(3s(q_j,p_j))^∨` of the Seifert prefactor.
fn seifert_exponent(s: &SeifertData, at: &SeifertAtK, k: PrimeK) -> Result<i64> {
    let mut e = k.reduce(k.inv4() * k.reduce(k.inv(at.p)? * k.reduce(at.h) - 3 * at.sigma));
    for &(pj, qj) in &s.fractions {
        e = k.reduce(e - 3 * dedekind_vee(qj, pj, k)?.value);
    }
    Ok(e)
}

/// The prefactor phase `q̌^E` of the Seifert closed form, built as an
/// [`ExtendedPhase`] and reduced to ℤ[q̌].
pub fn seifert_prefactor(s: &SeifertData, k: PrimeK) -> Result<CycInt> {
    let at = seifert_at_k(s, k)?;
    let e = seifert_exponent(s, &at, k)?;
    ExtendedPhase::qcheck(e, k).reduce()
}

/// `(H/(4P) − 3σ/4 − 3Σ s(q_j,p_j))`, the exponent of `q` in `λ`'s prefactor.
pub fn seifert_q_exponent(s: &SeifertData) -> Result<BigRational> {
    let p = s.p_product()?;
    let h = s.h()?;
    let mut r = rat(h, 4 * p) - rat(3 * s.sigma()?, 4);
    for &(pj, qj) in &s.fractions {
        r -= dedekind_sum(qj, pj)? * BigRational::from_integer(BigInt::from(3));
    }
    Ok(r)
}

/// `Z′` of a Seifert space:
/// `(|H|/K)·sgn(H)·q̌^E·Σ_n C_n q̌^{4*·PH*·(n²+1)}·[PH*·n]`.
///
/// The prefactor is cross-checked through `♢(q̌^E) = (q^{r})^∨` with `r` from
/// [`seifert_q_exponent`].
pub fn seifert_zprime(s: &SeifertData, k: PrimeK) -> Result<CycInt> {
    let at = seifert_at_k(s, k)?;
    let e = seifert_exponent(s, &at, k)?;
    let pre = ExtendedPhase::qcheck(e, k).reduce()?;
    let want = vee(&q_power(&seifert_q_exponent(s)?, k.half()), k)?;
    if pre.diamond() != want {
        return Err(Error::DiamondMismatch(format!(
            "{s}: ♢(q̌^{e}) = {} but (q^r)^∨ = {want}",
            pre.diamond()
        )));
    }
    let sign = legendre(at.h.abs(), k) * at.h.signum();
    Ok((&pre * &at.sum).scale(&BigInt::from(sign)))
}

/// The prefactor obtained by multiplying the printed factors one by one:
/// `i·e^{iπκσ/4}·e^{3iπ(K−2)σ/(4K)}·q̌^{(1/2−2*)σ}·Π(|p_j|/K)sgn(p_j)
/// ·q̌^{4*Σ p_j* q_j − Σ(3s)^∨}·(P*H/K)·e^{iπ(κ−1)/4}`.
///
/// Multiplied by [`seifert_sum`] this gives `sign(H/P)·Z′`, i.e. the factors
/// as printed are off by `−1` when `H/P < 0`; the unit tests pin that
/// relation, and [`seifert_zprime`] uses the corrected assembly.
pub fn seifert_literal_prefactor(s: &SeifertData, k: PrimeK) -> Result<ExtendedPhase> {
    let at = seifert_at_k(s, k)?;
    let kk = k.get();
    let kappa = k.kappa();
    let sigma = at.sigma;
    let mut ph = ExtendedPhase::eighth(2 + kappa * sigma + kappa - 1, k)
        .mul(&ExtendedPhase::quarter_pi_over_k(3 * (kk - 2) * sigma, k))?
        .mul(&ExtendedPhase::quarter_pi_over_k(4 * sigma, k))?
        .mul(&ExtendedPhase::qcheck(-k.inv2() * sigma, k))?;
    let mut sign = legendre(k.reduce(k.inv(at.p)? * k.reduce(at.h)), k);
    let mut qexp = 0i64;
    for &(pj, qj) in &s.fractions {
        sign *= legendre(pj.abs(), k) * pj.signum();
        qexp = k.reduce(qexp + k.inv4() * k.reduce(k.inv(pj)? * k.reduce(qj)));
        qexp = k.reduce(qexp - 3 * dedekind_vee(qj, pj, k)?.value);
    }
    ph = ph.mul(&ExtendedPhase::qcheck(qexp, k))?;
    if sign < 0 {
        ph = ph.mul(&ExtendedPhase::minus_one(k))?;
    }
    Ok(ph)
}

/// The colour sum of [`seifert_zprime`] (without prefactor).
pub fn seifert_sum(s: &SeifertData, k: PrimeK) -> Result<CycInt> {
    Ok(seifert_at_k(s, k)?.sum)
}

/// `λ(X) = q^{r}·Σ_k h_k (2k+1)!! (P/H)^k T^{k+1}/sinh T`, with
/// `T = ½ log(1+x)`, `r` from [`seifert_q_exponent`] and
/// `h(y) = Π_j g(y/p_j²) / g(y)^{N−2}`, `g(y) = sinh√y/√y`.
pub fn seifert_lambda_series(s: &SeifertData, d: usize) -> Result<LambdaSeries> {
    let p = s.p_product()?;
    let h = s.h()?;
    let n = s.fractions.len() as i64;
    // g(y) = Σ y^k/(2k+1)!
    let sinh_t = sinc_series(2 * d, false);
    let g_of = |scale: &BigRational| -> RatSeries {
        let mut c = Vec::with_capacity(d + 1);
        let mut sk = BigRational::one();
        for k in 0..=d {
            c.push(sinh_t.coeff(2 * k) * &sk);
            sk *= scale;
        }
        RatSeries::from_coeffs(c)
    };
    let g = g_of(&BigRational::one());
    let mut hy = RatSeries::one(d);
    for &(pj, _) in &s.fractions {
        hy = s_mul(&hy, &g_of(&rat(1, pj * pj)));
    }
    match n - 2 {
        e if e > 0 => {
            for _ in 0..e {
                hy = s_div(&hy, &g)?;
            }
        }
        e => {
            for _ in 0..(-e) {
                hy = s_mul(&hy, &g);
            }
        }
    }
    let t = log1p(d).scale(&rat(1, 2));
    // T / sinh T in x
    let t_over_sinh = s_div(&RatSeries::one(d), &sinc_series(d, false))?.compose(&t)?;
    let ratio = rat(p, h);
    let mut acc = RatSeries::zero(d);
    let mut t_pow = RatSeries::one(d);
    let mut ratio_pow = BigRational::one();
    for k in 0..=d {
        let c = hy.coeff(k) * BigRational::from_integer(double_factorial_odd(k + 1)) * &ratio_pow;
        if !c.is_zero() {
            acc = s_add(&acc, &t_pow.scale(&c));
        }
        t_pow = s_mul(&t_pow, &t);
        ratio_pow *= &ratio;
    }
    let series = s_mul(&s_mul(&acc, &t_over_sinh), &q_power(&seifert_q_exponent(s)?, d));
    LambdaSeries::closed_form(s.to_string(), series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::Precision;

    fn pk(k: i64) -> PrimeK {
        PrimeK::new(k).unwrap()
    }

    fn lam(v: &[(i64, i64)]) -> Vec<BigRational> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn cn_small_cases() {
        let t = CnTable::new(&[3]).unwrap();
        assert_eq!(t.c, BTreeMap::from([(3, BigInt::one())]));
        let t = CnTable::new(&[1, 1]).unwrap();
        assert_eq!(t.c, BTreeMap::from([(1, BigInt::one())]));
        let t = CnTable::new(&[2, 1, 1]).unwrap();
        assert_eq!(t.c, BTreeMap::from([(2, BigInt::one())]));
        let t = CnTable::new(&[2, 3, 4]).unwrap();
        t.verify().unwrap();
    }

    #[test]
    fn lens_l21_lambda() {
        let l = lens_lambda_series(2, 1, 4).unwrap();
        assert_eq!(l.lambda[0], rat(1, 1));
        assert!(l.lambda.len() == 5);
    }

    #[test]
    fn seifert_lambda_poincare_sphere() {
        let s = SeifertData::new(vec![(2, 1), (3, 1), (5, -4)]).unwrap();
        let l = seifert_lambda_series(&s, 4).unwrap();
        assert_eq!(l.lambda, lam(&[(1, 1), (-6, 1), (45, 1), (-464, 1), (6224, 1)]));
    }

    #[test]
    fn seifert_lambda_other_cases() {
        let s = SeifertData::new(vec![(2, 1), (3, 1), (5, 1)]).unwrap();
        let l = seifert_lambda_series(&s, 2).unwrap();
        assert_eq!(l.lambda, lam(&[(1, 1), (-87, 62), (12835, 7688)]));
        let s = SeifertData::new(vec![(3, 2), (5, 3)]).unwrap();
        let l = seifert_lambda_series(&s, 2).unwrap();
        assert_eq!(l.lambda, lam(&[(1, 1), (-9, 38), (303, 2888)]));
    }

    #[test]
    fn seifert_literal_assembly_differs_by_sigma() {
        for fr in [
            vec![(2, 1), (3, 1), (5, 1)],
            vec![(2, 1), (3, 1), (5, -4)],
            vec![(2, -1), (3, 1), (7, 1)],
            vec![(3, 2), (5, 3)],
        ] {
            let s = SeifertData::new(fr).unwrap();
            for k in [7, 11, 13] {
                let k = pk(k);
                let Ok(z) = seifert_zprime(&s, k) else { continue };
                let lit = seifert_literal_prefactor(&s, k).unwrap().eval()
                    * seifert_sum(&s, k).unwrap().eval_complex(Precision::Double);
                let want = z.eval_complex(Precision::Double) * s.sigma().unwrap() as f64;
                assert!((lit - want).norm() < 1e-9, "{s} at K = {}: {lit} vs {want}", k.get());
            }
        }
    }
}
