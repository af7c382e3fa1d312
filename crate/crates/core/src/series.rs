// SPDX-License-Identifier: MIT OR Apache-2.0

//! Truncated power series.
//!
//! [`RatSeries`] is ℚ[[x]] cut at a fixed degree cap with exact rational
//! coefficients; [`TruncPoly`] is the ring ℤ_K[x]/x^{(K+1)/2}, the common
//! target of the `◇` and `∨` homomorphisms.  The λ ↔ S conversions relate
//! `Σ λₙ xⁿ` to `(θ / sin θ)·exp(Σ Sₙ tⁿ)` where `θ = π/K`, `t = iθ`, and
//! `t = ½ log(1 + x)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{legendre, rat_check_big, PrimeK};
use crate::error::{Error, Result};

/// Shorthand for the rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Default degree cap for λ-series.
pub const DEFAULT_CAP: usize = 12;

/// A truncated power series over ℚ with cap `D` (coefficients of `x⁰..x^D`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatSeries {
    coeffs: Vec<BigRational>,
}

impl RatSeries {
    /// The zero series with cap `d`.
    pub fn zero(d: usize) -> Self {
        RatSeries {
            coeffs: vec![BigRational::zero(); d + 1],
        }
    }

    /// A constant series.
    pub fn constant(c: BigRational, d: usize) -> Self {
        let mut s = Self::zero(d);
        s.coeffs[0] = c;
        s
    }

    /// The constant `1`.
    pub fn one(d: usize) -> Self {
        Self::constant(BigRational::one(), d)
    }

    /// The monomial `c·xⁿ` (zero when `n > d`).
    pub fn monomial(c: BigRational, n: usize, d: usize) -> Self {
        let mut s = Self::zero(d);
        if n <= d {
            s.coeffs[n] = c;
        }
        s
    }

    /// Builds a series from coefficients; the cap is `coeffs.len() − 1`.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        RatSeries { coeffs }
    }

    /// The degree cap `D`.
    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `xⁿ` (zero above the cap).
    pub fn coeff(&self, n: usize) -> BigRational {
        self.coeffs.get(n).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Re-truncates to cap `d` (padding with zeros if `d` exceeds the cap).
    pub fn truncate(&self, d: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(d + 1, BigRational::zero());
        RatSeries { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        RatSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplies by `x^n`, dropping terms beyond the cap.
    pub fn shift_up(&self, n: usize) -> Self {
        let d = self.cap();
        let mut s = Self::zero(d);
        for i in 0..=d {
            if i + n <= d {
                s.coeffs[i + n] = self.coeffs[i].clone();
            }
        }
        s
    }

    /// Divides by `x^n`; the low coefficients must vanish.  The cap drops by `n`.
    pub fn shift_down(&self, n: usize) -> Result<Self> {
        if self.coeffs[..n.min(self.coeffs.len())].iter().any(|c| !c.is_zero()) {
            return Err(Error::NonUnitDivisor);
        }
        if n > self.cap() {
            return Err(Error::InsufficientTerms {
                needed: n,
                have: self.cap(),
            });
        }
        Ok(RatSeries {
            coeffs: self.coeffs[n..].to_vec(),
        })
    }

    /// Formal derivative (cap drops by one, floored at zero).
    pub fn derivative(&self) -> Self {
        let d = self.cap();
        if d == 0 {
            return Self::zero(0);
        }
        RatSeries {
            coeffs: (1..=d)
                .map(|n| &self.coeffs[n] * BigRational::from_integer(BigInt::from(n)))
                .collect(),
        }
    }

    /// Formal antiderivative with zero constant (cap rises by one).
    pub fn integral(&self) -> Self {
        let mut c = vec![BigRational::zero()];
        for (n, a) in self.coeffs.iter().enumerate() {
            c.push(a / BigRational::from_integer(BigInt::from(n + 1)));
        }
        RatSeries { coeffs: c }
    }

    /// Composition `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &RatSeries) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantInExp);
        }
        let d = self.cap().min(inner.cap());
        let inner = inner.truncate(d);
        let mut acc = RatSeries::zero(d);
        for a in self.coeffs[..=d].iter().rev() {
            acc = s_add(&s_mul(&acc, &inner), &RatSeries::constant(a.clone(), d));
        }
        Ok(acc)
    }

    /// Rational evaluation at an exact point (finite sum of the truncation).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for RatSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Sum; mixing caps takes the minimum cap.
pub fn s_add(a: &RatSeries, b: &RatSeries) -> RatSeries {
    let d = a.cap().min(b.cap());
    RatSeries {
        coeffs: (0..=d).map(|n| &a.coeffs[n] + &b.coeffs[n]).collect(),
    }
}

/// Difference; mixing caps takes the minimum cap.
pub fn s_sub(a: &RatSeries, b: &RatSeries) -> RatSeries {
    let d = a.cap().min(b.cap());
    RatSeries {
        coeffs: (0..=d).map(|n| &a.coeffs[n] - &b.coeffs[n]).collect(),
    }
}

/// Truncated product.
pub fn s_mul(a: &RatSeries, b: &RatSeries) -> RatSeries {
    let d = a.cap().min(b.cap());
    let mut c = vec![BigRational::zero(); d + 1];
    for i in 0..=d {
        if a.coeffs[i].is_zero() {
            continue;
        }
        for j in 0..=d - i {
            if !b.coeffs[j].is_zero() {
                c[i + j] += &a.coeffs[i] * &b.coeffs[j];
            }
        }
    }
    RatSeries { coeffs: c }
}

/// Truncated quotient; the divisor needs a nonzero constant term.
pub fn s_div(a: &RatSeries, b: &RatSeries) -> Result<RatSeries> {
    if b.coeffs[0].is_zero() {
        return Err(Error::NonUnitDivisor);
    }
    let d = a.cap().min(b.cap());
    let inv0 = b.coeffs[0].recip();
    let mut c: Vec<BigRational> = Vec::with_capacity(d + 1);
    for n in 0..=d {
        let mut acc = a.coeffs[n].clone();
        for k in 1..=n {
            acc -= &b.coeffs[k] * &c[n - k];
        }
        c.push(acc * &inv0);
    }
    Ok(RatSeries { coeffs: c })
}

/// `exp(a)` for a series with zero constant term.
pub fn s_exp(a: &RatSeries) -> Result<RatSeries> {
    if !a.coeffs[0].is_zero() {
        return Err(Error::NonzeroConstantInExp);
    }
    let d = a.cap();
    let mut b = vec![BigRational::one()];
    for n in 1..=d {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            if !a.coeffs[k].is_zero() {
                acc += &a.coeffs[k] * BigRational::from_integer(BigInt::from(k)) * &b[n - k];
            }
        }
        b.push(acc / BigRational::from_integer(BigInt::from(n)));
    }
    Ok(RatSeries { coeffs: b })
}

/// `log(a)` for a series with constant term `1`.
pub fn s_log(a: &RatSeries) -> Result<RatSeries> {
    if !a.coeffs[0].is_one() {
        return Err(Error::BadNormalization(format!(
            "log needs constant term 1, got {}",
            a.coeffs[0]
        )));
    }
    let d = a.cap();
    let q = s_div(&a.derivative(), &a.truncate(d.saturating_sub(1)))?;
    Ok(q.integral().truncate(d))
}

/// `log(1 + x)` to cap `d`.
pub fn log1p(d: usize) -> RatSeries {
    let mut s = RatSeries::zero(d);
    for n in 1..=d {
        let sign = if n % 2 == 1 { 1 } else { -1 };
        s.coeffs[n] = rat(sign, n as i64);
    }
    s
}

/// `(1 + x)^r = exp(r·log(1+x))`, via the generalised binomial series.
pub fn q_power(r: &BigRational, d: usize) -> RatSeries {
    let mut s = RatSeries::zero(d);
    let mut c = BigRational::one();
    s.coeffs[0] = c.clone();
    for n in 1..=d {
        c = c * (r - BigRational::from_integer(BigInt::from(n - 1)))
            / BigRational::from_integer(BigInt::from(n));
        s.coeffs[n] = c.clone();
    }
    s
}

/// `(q^{a/2} − q^{−a/2}) / (q^{1/2} − q^{−1/2})` with `q = 1 + x`.
pub fn sinh_ratio(a: &BigRational, d: usize) -> RatSeries {
    let half = rat(1, 2);
    let ah = a * &half;
    let num = s_sub(&q_power(&ah, d + 1), &q_power(&(-&ah), d + 1));
    let den = s_sub(&q_power(&half, d + 1), &q_power(&(-&half), d + 1));
    let num = num.shift_down(1).expect("numerator vanishes at x = 0");
    let den = den.shift_down(1).expect("denominator vanishes at x = 0");
    s_div(&num, &den).expect("denominator has constant term 1")
}

/// `θ / sin θ` as a series in `θ` to cap `d` (even coefficients only).
pub fn theta_over_sin(d: usize) -> RatSeries {
    s_div(&RatSeries::one(d), &sinc_series(d, true)).expect("constant term 1")
}

/// `sin θ / θ` (`alternating = true`) or `sinh t / t` as a series to cap `d`:
/// `Σ (±1)^k θ^{2k} / (2k+1)!`.
pub fn sinc_series(d: usize, alternating: bool) -> RatSeries {
    let mut s = RatSeries::zero(d);
    let mut f = BigInt::one();
    for k in 0..=d / 2 {
        if k > 0 {
            f *= BigInt::from(2 * k) * BigInt::from(2 * k + 1);
        }
        let sign = if alternating && k % 2 == 1 { -1 } else { 1 };
        s.coeffs[2 * k] = BigRational::new(BigInt::from(sign), f.clone());
    }
    s
}

/// `½ log(1+x)`.
fn half_log1p(d: usize) -> RatSeries {
    log1p(d).scale(&rat(1, 2))
}

/// `λ(x) = (θ/sin θ)·exp(Σ_{n≥1} Sₙ tⁿ)` with `t = iθ = ½ log(1+x)`.
///
/// `s[n]` is `Sₙ`; `s[0]` must be zero.  The factor `θ/sin θ` is expanded in
/// `θ` and rewritten through `θ = −i t`, carrying real and imaginary rational
/// parts separately; the imaginary part must cancel.
pub fn lambda_from_s(s: &[BigRational], d: usize) -> Result<RatSeries> {
    if s.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::NonzeroConstantInExp);
    }
    // θ/sin θ in θ, then θⁿ = (−i)ⁿ tⁿ.
    let ts = theta_over_sin(d);
    let mut re = RatSeries::zero(d);
    let mut im = RatSeries::zero(d);
    for n in 0..=d {
        let c = ts.coeff(n);
        match n % 4 {
            0 => re.coeffs[n] = c,
            1 => im.coeffs[n] = -c,
            2 => re.coeffs[n] = -c,
            _ => im.coeffs[n] = c,
        }
    }
    if let Some(n) = im.coeffs.iter().position(|c| !c.is_zero()) {
        return Err(Error::ImaginaryResidue(n));
    }
    let mut sum = RatSeries::zero(d);
    for (n, c) in s.iter().enumerate().take(d + 1) {
        sum.coeffs[n] = c.clone();
    }
    let in_t = s_mul(&re, &s_exp(&sum)?);
    in_t.compose(&half_log1p(d))
}

/// Inverse of [`lambda_from_s`]: returns `Sₙ` for `n = 0..=d` (`S₀ = 0`).
pub fn s_from_lambda(lambda: &RatSeries, d: usize) -> Result<Vec<BigRational>> {
    if !lambda.coeff(0).is_one() {
        return Err(Error::BadNormalization(format!(
            "λ₀ must be 1, got {}",
            lambda.coeff(0)
        )));
    }
    let d = d.min(lambda.cap());
    let log_l = s_log(&lambda.truncate(d))?;
    // x = e^{2t} − 1
    let mut x_of_t = RatSeries::zero(d);
    let mut f = BigInt::one();
    for n in 1..=d {
        f *= BigInt::from(n);
        x_of_t.coeffs[n] = BigRational::new(BigInt::from(2).pow(n as u32), f.clone());
    }
    let in_t = log_l.compose(&x_of_t)?;
    // subtract log(θ/sin θ) expressed in t: θ^{2k} = (−1)^k t^{2k}.
    let ts = theta_over_sin(d);
    let mut re = RatSeries::zero(d);
    for n in (0..=d).step_by(2) {
        re.coeffs[n] = if n % 4 == 0 { ts.coeff(n) } else { -ts.coeff(n) };
    }
    let out = s_sub(&in_t, &s_log(&re)?);
    Ok(out.coeffs)
}

/// An element of ℤ_K[x]/x^{(K+1)/2}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncPoly {
    k: PrimeK,
    coeffs: Vec<i64>,
}

impl TruncPoly {
    /// Builds from residues, reducing each mod `K` and padding/truncating to
    /// `(K+1)/2` coefficients.
    pub fn from_residues(k: PrimeK, mut coeffs: Vec<i64>) -> Self {
        let len = k.half() + 1;
        coeffs.resize(len, 0);
        for c in coeffs.iter_mut() {
            *c = k.reduce(*c);
        }
        TruncPoly { k, coeffs }
    }

    pub fn zero(k: PrimeK) -> Self {
        Self::from_residues(k, vec![])
    }

    pub fn constant(k: PrimeK, c: i64) -> Self {
        Self::from_residues(k, vec![c])
    }

    pub fn one(k: PrimeK) -> Self {
        Self::constant(k, 1)
    }

    pub fn modulus(&self) -> PrimeK {
        self.k
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.k != o.k {
            Err(Error::MixedModulus(self.k.get(), o.k.get()))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_residues(
            self.k,
            self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_residues(
            self.k,
            self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let n = self.coeffs.len();
        let kk = self.k.get();
        let mut c = vec![0i64; n];
        for i in 0..n {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] = (c[i + j] + self.coeffs[i] * o.coeffs[j]) % kk;
            }
        }
        Ok(Self::from_residues(self.k, c))
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.k.reduce(c);
        Self::from_residues(self.k, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.k);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse; the constant term must be nonzero mod `K`.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.k.inv(self.coeffs[0]).map_err(|_| Error::NonUnitDivisor)?;
        let n = self.coeffs.len();
        let mut c = vec![0i64; n];
        for m in 0..n {
            let mut acc = if m == 0 { 1 } else { 0 };
            for j in 1..=m {
                acc -= self.coeffs[j] * c[m - j] % self.k.get();
            }
            c[m] = self.k.reduce(acc % self.k.get() * inv0);
        }
        Ok(Self::from_residues(self.k, c))
    }

    /// Index of the first differing coefficient, if any.
    pub fn first_mismatch(&self, o: &Self) -> Option<usize> {
        self.coeffs.iter().zip(&o.coeffs).position(|(a, b)| a != b)
    }

    /// Agreement in degrees `< n`.
    pub fn agrees_below(&self, o: &Self, n: usize) -> bool {
        self.coeffs
            .iter()
            .zip(&o.coeffs)
            .take(n)
            .all(|(a, b)| a == b)
    }
}

impl fmt::Display for TruncPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}] mod {}", parts.join(", "), self.k)
    }
}

macro_rules! tp_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&TruncPoly> for &TruncPoly {
            type Output = TruncPoly;
            fn $method(self, rhs: &TruncPoly) -> TruncPoly {
                self.$inner(rhs).expect("operands must share the same K")
            }
        }
    };
}

tp_binop!(Add, add, try_add);
tp_binop!(Sub, sub, try_sub);
tp_binop!(Mul, mul, try_mul);

/// The `∨` map: coefficient-wise check map, truncated at degree `(K−1)/2`.
pub fn vee(s: &RatSeries, k: PrimeK) -> Result<TruncPoly> {
    let h = k.half();
    if s.cap() < h {
        return Err(Error::InsufficientTerms {
            needed: h,
            have: s.cap(),
        });
    }
    let mut out = Vec::with_capacity(h + 1);
    for n in 0..=h {
        let r = rat_check_big(&s.coeffs[n], k).map_err(|_| Error::DenominatorDivisibleByK {
            k: k.get(),
            degree: Some(n),
        })?;
        out.push(r.value);
    }
    Ok(TruncPoly::from_residues(k, out))
}

/// `[log(1+x)]^∨ = x·Σₙ (−1)ⁿ (n+1)* xⁿ`.
pub fn log_vee(k: PrimeK) -> TruncPoly {
    let h = k.half();
    let mut c = vec![0i64; h + 1];
    for n in 0..h {
        let inv = k.inv((n + 1) as i64).expect("n + 1 < K");
        c[n + 1] = if n % 2 == 0 { inv } else { -inv };
    }
    TruncPoly::from_residues(k, c)
}

/// The checked binomial polynomial `P_m^∨(α) = (m!)*·α(α−1)…(α−m+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BinomVee {
    m: usize,
    k: PrimeK,
    inv_fact: i64,
}

impl BinomVee {
    /// Evaluates at an integer argument, returning a residue in `[0, K)`.
    pub fn eval(&self, alpha: i64) -> i64 {
        let mut acc = self.inv_fact;
        for i in 0..self.m as i64 {
            acc = self.k.reduce(acc * self.k.reduce(alpha - i));
        }
        acc
    }

    pub fn degree(&self) -> usize {
        self.m
    }
}

/// Builds the evaluator for `P_m^∨`.
pub fn binom_vee(m: usize, k: PrimeK) -> Result<BinomVee> {
    if m as i64 >= k.get() {
        return Err(Error::FactorialNotInvertible(m, k.get()));
    }
    let f = (1..=m as i64).fold(1i64, |acc, i| k.reduce(acc * i));
    Ok(BinomVee {
        m,
        k,
        inv_fact: k.inv(f).expect("m < K"),
    })
}

/// `(x / log^∨(1+x))^m` in ℤ′_K[x].
pub fn x_over_log_pow(m: usize, k: PrimeK) -> TruncPoly {
    // log^∨ = x·L(x) with L(0) = 1 and Lₙ = (−1)ⁿ (n+1)*.
    let h = k.half();
    let mut l = vec![0i64; h + 1];
    for (n, c) in l.iter_mut().enumerate() {
        let inv = k.inv((n + 1) as i64).expect("n + 1 ≤ (K+1)/2 < K");
        *c = if n % 2 == 0 { inv } else { -inv };
    }
    let l = TruncPoly::from_residues(k, l);
    l.inverse().expect("L(0) = 1").pow(m as u32)
}

/// Closed form of the `◇` image of the normalised odd Gauss moment,
/// `(−1)^m·legendre(pq*)·(p*q)^m·(2*)^{2m}·(2m)!·(m!)*·(x/log^∨(1+x))^m`,
/// valid in degrees `< (K+1)/2 − m`.
///
/// The `(p*q)^m` factor is the discrete counterpart of the `|q/p|^m` that
/// the Gaussian integral `∫ e^{c α²} α^{2m}` picks up from `c = p/q`; it
/// comes from matching the `n^{2m}` coefficients of the completed-square
/// identity, whose right-hand side is `q̌^{−p*q n²}`.
pub fn gauss_moment_diamond(p: i64, q: i64, m: usize, k: PrimeK) -> Result<TruncPoly> {
    let pq = k.reduce(p * k.inv(q)?);
    if pq == 0 {
        return Err(Error::ZeroInverse(p, k.get()));
    }
    if m > k.half() {
        return Err(Error::FactorialNotInvertible(m, k.get()));
    }
    let mut c = legendre(pq, k);
    if m % 2 == 1 {
        c = -c;
    }
    let two_star = k.inv2();
    let c = k.reduce(c * k.pow(two_star, 2 * m as u64));
    let fact2m = (1..=2 * m as i64).fold(1i64, |acc, i| k.reduce(acc * i));
    let factm = (1..=m as i64).fold(1i64, |acc, i| k.reduce(acc * i));
    let c = k.reduce(k.reduce(c * fact2m) * k.inv(factm)?);
    let ratio = k.reduce(k.inv(p)? * q);
    let c = k.reduce(c * k.pow(ratio, m as u64));
    Ok(x_over_log_pow(m, k).scale(c))
}

/// Where a λ-series came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    Reconstruction,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::Reconstruction => "reconstruction",
        })
    }
}

/// Ohtsuki series coefficients `λ₀..λ_{n_max}` with provenance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSeries {
    pub manifold: String,
    pub lambda: Vec<BigRational>,
    pub provenance: Provenance,
}

impl LambdaSeries {
    /// Wraps a closed-form series, asserting `λ₀ = 1`.
    pub fn closed_form(manifold: impl Into<String>, series: RatSeries) -> Result<Self> {
        if !series.coeff(0).is_one() {
            return Err(Error::BadNormalization(format!(
                "λ₀ = {} ≠ 1",
                series.coeff(0)
            )));
        }
        Ok(LambdaSeries {
            manifold: manifold.into(),
            lambda: series.coeffs().to_vec(),
            provenance: Provenance::ClosedForm,
        })
    }

    pub fn n_max(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn as_series(&self) -> RatSeries {
        RatSeries::from_coeffs(self.lambda.clone())
    }
}

/// `(2n − 1)!!` with `(−1)!! = 1`.
pub fn double_factorial_odd(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(2 * i - 1))
}

/// Converts a rational to `f64` (for diagnostics only).
pub fn rat_to_f64(r: &BigRational) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n.is_finite() && d.is_finite() {
        n / d
    } else {
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * f64::NAN
    }
}
