// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact arithmetic in the cyclotomic ring ℤ[q̌], `q̌ = e^{2πi/K}`.
//!
//! Elements are stored in the basis `{1, q̌, …, q̌^{K−2}}`; the relation
//! `1 + q̌ + … + q̌^{K−1} = 0` eliminates `q̌^{K−1}`, so equality is plain
//! coefficient comparison.  The companion basis `{1, x, …, x^{K−2}}` with
//! `x = q̌ − 1` is reached by a unitriangular binomial change of basis; in it
//! the relation reads `Σ_{n=0}^{K−1} C(K, n+1) xⁿ = 0`, a monic polynomial of
//! degree `K − 1` whose lower coefficients are all divisible by `K`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{legendre, PrimeK};
use crate::error::{Error, Result};
use crate::series::TruncPoly;

/// Binomial coefficient `C(n, r)` as a big integer (`0` when `r > n`).
pub fn binomial(n: usize, r: usize) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Pascal rows `C(j, n)` for `0 ≤ j, n < len`.
fn pascal(len: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(len);
    for j in 0..len {
        let mut row = vec![BigInt::zero(); len];
        row[0] = BigInt::one();
        for n in 1..=j {
            row[n] = &rows[j - 1][n - 1] + &rows[j - 1][n];
        }
        rows.push(row);
    }
    rows
}

/// Floating-point strategy for [`CycInt::eval_complex`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    /// Plain double-precision accumulation.
    #[default]
    Double,
    /// Neumaier-compensated accumulation with exact angle reduction.
    Compensated,
}

/// Neumaier-compensated accumulator for complex sums.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    re: f64,
    re_c: f64,
    im: f64,
    im_c: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    fn add_one(sum: &mut f64, comp: &mut f64, v: f64) {
        let t = *sum + v;
        if sum.abs() >= v.abs() {
            *comp += (*sum - t) + v;
        } else {
            *comp += (v - t) + *sum;
        }
        *sum = t;
    }

    pub fn add(&mut self, z: Complex64) {
        Self::add_one(&mut self.re, &mut self.re_c, z.re);
        Self::add_one(&mut self.im, &mut self.im_c, z.im);
    }

    pub fn merge(mut self, other: CompensatedSum) -> CompensatedSum {
        self.add(other.value());
        self
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re + self.re_c, self.im + self.im_c)
    }
}

/// `e^{2πi·num/den}` with the angle reduced exactly before evaluation.
pub fn root_of_unity(num: i64, den: i64) -> Complex64 {
    let r = num.rem_euclid(den);
    let theta = 2.0 * std::f64::consts::PI * (r as f64) / (den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// An element of ℤ[q̌] at a fixed odd prime `K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycInt {
    k: PrimeK,
    coeffs: Vec<BigInt>,
}

/// The same element written in the basis `{1, x, …, x^{K−2}}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPoly {
    k: PrimeK,
    coeffs: Vec<BigInt>,
}

impl CycInt {
    /// The zero element.
    pub fn zero(k: PrimeK) -> Self {
        CycInt {
            k,
            coeffs: vec![BigInt::zero(); (k.get() - 1) as usize],
        }
    }

    /// The unit element.
    pub fn one(k: PrimeK) -> Self {
        Self::from_int(k, 1)
    }

    /// An integer constant.
    pub fn from_int(k: PrimeK, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(k);
        z.coeffs[0] = n.into();
        z
    }

    /// Builds an element from canonical coefficients (length `K − 1`).
    pub fn from_coeffs(k: PrimeK, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != (k.get() - 1) as usize {
            return Err(Error::InvalidSpec(format!(
                "expected {} coefficients, got {}",
                k.get() - 1,
                coeffs.len()
            )));
        }
        Ok(CycInt { k, coeffs })
    }

    /// Builds an element from a length-`K` vector of coefficients of
    /// `q̌⁰ … q̌^{K−1}`, eliminating `q̌^{K−1}`.
    pub fn from_full(k: PrimeK, mut full: Vec<BigInt>) -> Self {
        let kk = k.get() as usize;
        assert_eq!(full.len(), kk, "full vector must have length K");
        let top = full.pop().expect("K ≥ 3");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CycInt { k, coeffs: full }
    }

    /// Builds `Σ counts[e] q̌^e` from small integer counts indexed by the
    /// exponent modulo `K`.
    pub fn from_exponent_counts(k: PrimeK, counts: &[i64]) -> Self {
        let kk = k.get() as usize;
        assert_eq!(counts.len(), kk);
        let top = counts[kk - 1];
        let coeffs = counts[..kk - 1]
            .iter()
            .map(|&c| BigInt::from(c - top))
            .collect();
        CycInt { k, coeffs }
    }

    /// `q̌^e`, with `e` reduced modulo `K`.
    pub fn qpow(e: i64, k: PrimeK) -> Self {
        let kk = k.get();
        let r = k.reduce(e);
        let mut z = Self::zero(k);
        if r == kk - 1 {
            for c in z.coeffs.iter_mut() {
                *c = BigInt::from(-1);
            }
        } else {
            z.coeffs[r as usize] = BigInt::one();
        }
        z
    }

    /// The prime `K`.
    pub fn modulus(&self) -> PrimeK {
        self.k
    }

    /// Canonical coefficients of `1, q̌, …, q̌^{K−2}`.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.k != other.k {
            Err(Error::MixedModulus(self.k.get(), other.k.get()))
        } else {
            Ok(())
        }
    }

    fn full(&self) -> Vec<BigInt> {
        let mut v = self.coeffs.clone();
        v.push(BigInt::zero());
        v
    }

    /// Checked addition.
    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CycInt {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Checked subtraction.
    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CycInt {
            k: self.k,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Checked multiplication.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let kk = self.k.get() as usize;
        let mut full = vec![BigInt::zero(); kk];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let idx = (i + j) % kk;
                full[idx] += a * b;
            }
        }
        Ok(Self::from_full(self.k, full))
    }

    /// Multiplication by an integer.
    pub fn scale(&self, n: &BigInt) -> Self {
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * n).collect(),
        }
    }

    /// Multiplication by `q̌^e` (a rotation of the length-`K` vector).
    pub fn mul_qpow(&self, e: i64) -> Self {
        let kk = self.k.get() as usize;
        let shift = self.k.reduce(e) as usize;
        let full = self.full();
        let mut out = vec![BigInt::zero(); kk];
        for (i, c) in full.into_iter().enumerate() {
            out[(i + shift) % kk] = c;
        }
        Self::from_full(self.k, out)
    }

    /// Complex conjugation `q̌ ↦ q̌^{−1}`.
    pub fn conj(&self) -> Self {
        let kk = self.k.get() as usize;
        let full = self.full();
        let mut out = vec![BigInt::zero(); kk];
        for (i, c) in full.into_iter().enumerate() {
            out[(kk - i) % kk] = c;
        }
        Self::from_full(self.k, out)
    }

    /// `self^n` for `n ≥ 0`.
    /// The Galois automorphism `q̌ ↦ q̌^j` (`K ∤ j`).
    pub fn galois(&self, j: i64) -> Self {
        let kk = self.k.get() as usize;
        let jr = self.k.reduce(j) as usize;
        assert!(jr != 0, "q̌ ↦ q̌^0 is not an automorphism");
        let mut full = vec![BigInt::zero(); kk];
        for (i, c) in self.coeffs.iter().enumerate() {
            full[(i * jr) % kk] += c;
        }
        CycInt::from_full(self.k, full)
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.k);
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Change of basis to powers of `x = q̌ − 1`.
    pub fn to_xpoly(&self) -> XPoly {
        let len = self.coeffs.len();
        let rows = pascal(len);
        let mut out = vec![BigInt::zero(); len];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (n, b) in rows[j].iter().enumerate().take(j + 1) {
                out[n] += c * b;
            }
        }
        XPoly {
            k: self.k,
            coeffs: out,
        }
    }

    /// Inverse change of basis.
    pub fn from_xpoly(p: &XPoly) -> Self {
        let len = p.coeffs.len();
        let rows = pascal(len);
        let mut out = vec![BigInt::zero(); len];
        for (n, c) in p.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // xⁿ = Σ_i C(n,i) (−1)^{n−i} q̌^i
            for (i, b) in rows[n].iter().enumerate().take(n + 1) {
                if (n - i) % 2 == 0 {
                    out[i] += c * b;
                } else {
                    out[i] -= c * b;
                }
            }
        }
        CycInt {
            k: p.k,
            coeffs: out,
        }
    }

    /// Largest `n ≤ K − 1` such that the `x`-coefficients of degree `< n`
    /// are all divisible by `K`.
    pub fn x_order(&self) -> usize {
        self.to_xpoly().x_order()
    }

    /// The ring homomorphism `◇ : ℤ[q̌] → ℤ_K[x]/x^{(K+1)/2}`.
    pub fn diamond(&self) -> TruncPoly {
        self.to_xpoly().diamond()
    }

    /// Exact division by `x^n`; errors if `x^n` does not divide `self`.
    pub fn div_x_pow(&self, n: usize) -> Result<Self> {
        let mut p = self.to_xpoly();
        for _ in 0..n {
            p = p.div_x()?;
        }
        Ok(Self::from_xpoly(&p))
    }

    /// `x^n` as an element of the ring.
    pub fn x_pow(k: PrimeK, n: usize) -> Self {
        let x = Self::qpow(1, k).try_sub(&Self::one(k)).expect("same K");
        x.pow(n as u32)
    }

    /// Numeric embedding `q̌ ↦ e^{2πi/K}`.
    pub fn eval_complex(&self, precision: Precision) -> Complex64 {
        let kk = self.k.get();
        match precision {
            Precision::Double => self
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, c)| root_of_unity(j as i64, kk) * big_to_f64(c))
                .sum(),
            Precision::Compensated => {
                let mut acc = CompensatedSum::new();
                for (j, c) in self.coeffs.iter().enumerate() {
                    acc.add(root_of_unity(j as i64, kk) * big_to_f64(c));
                }
                acc.value()
            }
        }
    }

    /// Multiplicative inverse of a unit, via extended Euclid against the
    /// cyclotomic polynomial over ℚ followed by an integrality check.
    pub fn invert_unit(&self) -> Result<Self> {
        let inv = field_inverse(self)?;
        rational_to_cycint(self.k, &inv).ok_or(Error::NotAUnit)
    }

    /// Human-readable polynomial in `q`.
    pub fn to_poly_string(&self) -> String {
        poly_string(&self.coeffs, "q")
    }
}

fn big_to_f64(c: &BigInt) -> f64 {
    c.to_f64().unwrap_or(f64::NAN)
}

fn poly_string(coeffs: &[BigInt], var: &str) -> String {
    let mut parts = Vec::new();
    for (j, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mono = match j {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{j}"),
        };
        let body = if mono.is_empty() {
            c.abs().to_string()
        } else if c.abs().is_one() {
            mono
        } else {
            format!("{}*{}", c.abs(), mono)
        };
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{} {}", if c.is_negative() { "-" } else { "+" }, body));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

impl XPoly {
    /// Builds an `XPoly` from its `K − 1` coefficients.
    pub fn from_coeffs(k: PrimeK, coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() != (k.get() - 1) as usize {
            return Err(Error::InvalidSpec(format!(
                "expected {} coefficients, got {}",
                k.get() - 1,
                coeffs.len()
            )));
        }
        Ok(XPoly { k, coeffs })
    }

    pub fn modulus(&self) -> PrimeK {
        self.k
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// See [`CycInt::x_order`].
    pub fn x_order(&self) -> usize {
        let kb = BigInt::from(self.k.get());
        self.coeffs
            .iter()
            .position(|c| !c.is_multiple_of(&kb))
            .unwrap_or(self.coeffs.len())
    }

    /// See [`CycInt::diamond`].
    pub fn diamond(&self) -> TruncPoly {
        let h = self.k.half();
        let coeffs = (0..=h).map(|n| self.k.reduce_big(&self.coeffs[n])).collect();
        TruncPoly::from_residues(self.k, coeffs)
    }

    /// Exact division by `x` using the relation polynomial.
    pub fn div_x(&self) -> Result<XPoly> {
        let kk = self.k.get() as usize;
        let kb = BigInt::from(self.k.get());
        let (c, r) = self.coeffs[0].div_rem(&kb);
        if !r.is_zero() {
            return Err(Error::DivisibilityFailure {
                found: 0,
                required: 1,
            });
        }
        // a − c·R where R = Σ_{n=0}^{K−1} C(K, n+1) xⁿ; then shift down.
        let mut out = Vec::with_capacity(kk - 1);
        for n in 1..kk - 1 {
            out.push(&self.coeffs[n] - &c * binomial(kk, n + 1));
        }
        out.push(-c);
        Ok(XPoly {
            k: self.k,
            coeffs: out,
        })
    }

    /// Human-readable polynomial in `x`.
    pub fn to_poly_string(&self) -> String {
        poly_string(&self.coeffs, "x")
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_poly_string())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl std::ops::$tr<&CycInt> for &CycInt {
            type Output = CycInt;
            fn $method(self, rhs: &CycInt) -> CycInt {
                self.$inner(rhs).expect("operands must share the same K")
            }
        }
        impl std::ops::$tr<CycInt> for CycInt {
            type Output = CycInt;
            fn $method(self, rhs: CycInt) -> CycInt {
                (&self).$inner(&rhs).expect("operands must share the same K")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        CycInt {
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl std::ops::Neg for CycInt {
    type Output = CycInt;
    fn neg(self) -> CycInt {
        -&self
    }
}

/// Checked ring operations matching the spec's `add`/`mul` signatures.
pub fn add(a: &CycInt, b: &CycInt) -> Result<CycInt> {
    a.try_add(b)
}

/// See [`add`].
pub fn mul(a: &CycInt, b: &CycInt) -> Result<CycInt> {
    a.try_mul(b)
}

/// `q̌^e` at `K`.
pub fn qpow(e: i64, k: PrimeK) -> CycInt {
    CycInt::qpow(e, k)
}

/// Gauss sum `Σ_{α=0}^{K−1} q̌^{cα²}`.
pub fn gauss_sum(c: i64, k: PrimeK) -> CycInt {
    let kk = k.get();
    let mut counts = vec![0i64; kk as usize];
    for a in 0..kk {
        let e = k.reduce(k.reduce(c) * (a * a % kk));
        counts[e as usize] += 1;
    }
    CycInt::from_exponent_counts(k, &counts)
}

/// `Σ′_{odd α ∈ [−K, K]} q̌^{pα²} α^{2m}`, where the boundary terms `α = ±K`
/// carry weight ½.  Both boundary terms are equal, so this is the plain sum
/// over odd `α ∈ (−K, K]`, a full period of odd residues mod `2K`.
pub fn odd_gauss_moment(p: i64, m: u32, k: PrimeK) -> CycInt {
    let kk = k.get();
    let mut full = vec![BigInt::zero(); kk as usize];
    let pr = k.reduce(p);
    let mut a = -kk + 2;
    while a <= kk {
        let e = k.reduce(pr * k.reduce(a * a));
        full[e as usize] += BigInt::from(a).pow(2 * m);
        a += 2;
    }
    CycInt::from_full(k, full)
}

/// The unit `u` with `gauss_sum(1) = x^{(K−1)/2} · u⁻¹`.
pub fn unit_u(k: PrimeK) -> Result<CycInt> {
    let g = gauss_sum(1, k);
    let ginv = field_inverse(&g)?;
    let xh = CycInt::x_pow(k, k.half());
    let xh_q: Vec<BigRational> = xh
        .coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let prod = mul_mod_cyclotomic(k, &xh_q, &ginv);
    rational_to_cycint(k, &prod).ok_or_else(|| {
        Error::IntegralityFailure(format!("x^{}/G(1) at K = {} is not integral", k.half(), k))
    })
}

/// `a⁻¹` with `a` viewed as invertible in the cyclotomic field, as a
/// rational coefficient vector of length `K − 1`.
///
/// Uses `a⁻¹ = Π_{σ≠1} σ(a) / N(a)` over the Galois automorphisms
/// `σ_j: q̌ ↦ q̌^j`, which keeps every intermediate in ℤ[q̌]; the norm is the
/// rational integer `a·Π_{σ≠1} σ(a)`.
pub fn field_inverse(a: &CycInt) -> Result<Vec<BigRational>> {
    if a.is_zero() {
        return Err(Error::NotAUnit);
    }
    let k = a.k;
    let conjugates: Vec<CycInt> = (2..k.get()).map(|j| a.galois(j)).collect();
    let cofactor = product_tree(&conjugates).unwrap_or_else(|| CycInt::one(k));
    let norm_elt = a * &cofactor;
    if norm_elt.coeffs[1..].iter().any(|c| !c.is_zero()) || norm_elt.coeffs[0].is_zero() {
        return Err(Error::IntegralityFailure("norm is not a nonzero rational integer".into()));
    }
    let norm = norm_elt.coeffs[0].clone();
    Ok(cofactor
        .coeffs
        .iter()
        .map(|c| BigRational::new(c.clone(), norm.clone()))
        .collect())
}

/// Balanced product, so coefficient sizes grow evenly.
fn product_tree(xs: &[CycInt]) -> Option<CycInt> {
    match xs.len() {
        0 => None,
        1 => Some(xs[0].clone()),
        n => {
            let (l, r) = xs.split_at(n / 2);
            Some(&product_tree(l).expect("nonempty") * &product_tree(r).expect("nonempty"))
        }
    }
}

fn mul_mod_cyclotomic(k: PrimeK, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let kk = k.get() as usize;
    let mut full = vec![BigRational::zero(); kk];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            full[(i + j) % kk] += x * y;
        }
    }
    let top = full.pop().expect("K ≥ 3");
    full.into_iter().map(|c| c - &top).collect()
}

fn rational_to_cycint(k: PrimeK, v: &[BigRational]) -> Option<CycInt> {
    let coeffs: Option<Vec<BigInt>> = v
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect();
    coeffs.map(|coeffs| CycInt { k, coeffs })
}

/// `Σ′_{odd α} q̌^{a α² + b α}` over a full period `α ∈ (−K, K]` (see
/// [`odd_gauss_moment`]) — the completed-square sum used by the exact
/// identity checks.
pub fn odd_quadratic_sum(a: i64, b: i64, k: PrimeK) -> CycInt {
    let kk = k.get();
    let mut counts = vec![0i64; kk as usize];
    let (ar, br) = (k.reduce(a), k.reduce(b));
    let mut al = -kk + 2;
    while al <= kk {
        let e = k.reduce(ar * k.reduce(al * al) + br * k.reduce(al));
        counts[e as usize] += 1;
        al += 2;
    }
    CycInt::from_exponent_counts(k, &counts)
}

/// `legendre(c) · gauss_sum(1)`, the closed form of `gauss_sum(c)`.
pub fn gauss_sum_via_legendre(c: i64, k: PrimeK) -> CycInt {
    gauss_sum(1, k).scale(&BigInt::from(legendre(c, k)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(k: i64) -> PrimeK {
        PrimeK::new(k).unwrap()
    }

    #[test]
    fn qpow_wraps_and_relation_vanishes() {
        let k = pk(5);
        assert!(qpow(5, k).is_one());
        let mut s = CycInt::zero(k);
        for e in 0..5 {
            s = &s + &qpow(e, k);
        }
        assert!(s.is_zero());
        assert_eq!(&qpow(2, k) * &qpow(4, k), qpow(1, k));
    }

    #[test]
    fn basis_change_examples() {
        let k = pk(7);
        let x1 = qpow(1, k).to_xpoly();
        assert_eq!(x1.coeffs()[..3], [1.into(), 1.into(), 0.into()]);
        let x2 = qpow(2, k).to_xpoly();
        assert_eq!(x2.coeffs()[..3], [1.into(), 2.into(), 1.into()]);
        assert!(CycInt::zero(k).to_xpoly().coeffs().iter().all(Zero::is_zero));
        for e in 0..7 {
            let z = qpow(e, k);
            assert_eq!(CycInt::from_xpoly(&z.to_xpoly()), z);
        }
    }

    #[test]
    fn x_order_examples() {
        let k = pk(5);
        assert_eq!(CycInt::one(k).x_order(), 0);
        assert_eq!(CycInt::from_int(k, 5).x_order(), 4);
        assert_eq!(gauss_sum(1, k).x_order(), 2);
    }

    #[test]
    fn diamond_examples() {
        let k = pk(5);
        assert_eq!(qpow(1, k).diamond().coeffs(), &[1, 1, 0]);
        assert!(CycInt::zero(k).diamond().is_zero());
    }

    #[test]
    fn gauss_sum_examples() {
        let k = pk(5);
        assert_eq!(gauss_sum(0, k), CycInt::from_int(k, 5));
        let g = gauss_sum(1, k);
        assert_eq!(&g * &g, CycInt::from_int(k, 5));
        assert_eq!(gauss_sum(2, k), -&g);
    }

    #[test]
    fn odd_gauss_moment_hand_sum() {
        // α ∈ {−1, 1, 3}: 2q̌ + 9
        let k = pk(3);
        assert_eq!(
            odd_gauss_moment(1, 1, k),
            &qpow(1, k).scale(&2.into()) + &CycInt::from_int(k, 9)
        );
    }

    #[test]
    fn odd_gauss_moment_m0_squares_to_k() {
        for k in [3, 5, 7, 11, 13] {
            let k = pk(k);
            for p in 1..k.get() {
                let g = odd_gauss_moment(p, 0, k);
                let sign = if k.half() % 2 == 0 { 1 } else { -1 };
                assert_eq!(&g * &g, CycInt::from_int(k, sign * k.get()));
            }
        }
    }

    #[test]
    fn completed_square_small() {
        for k in [5, 7] {
            let k = pk(k);
            let g = gauss_sum(1, k);
            for p in 1..k.get() {
                for q in 1..k.get() {
                    for n in 0..k.get() {
                        let a = k.reduce(p * k.inv(q).unwrap());
                        let lhs = odd_quadratic_sum(a, 2 * n, k);
                        let e = -k.reduce(k.inv(p).unwrap() * q) * n * n;
                        let rhs = g.mul_qpow(e).scale(&legendre(a, k).into());
                        assert_eq!(lhs, rhs, "K = {}, p = {p}, q = {q}, n = {n}", k.get());
                    }
                }
            }
        }
    }

    #[test]
    fn invert_unit_examples() {
        let k = pk(7);
        assert_eq!(qpow(1, k).invert_unit().unwrap(), qpow(6, k));
        let m1 = CycInt::from_int(k, -1);
        assert_eq!(m1.invert_unit().unwrap(), m1);
        assert_eq!(CycInt::from_int(k, 2).invert_unit(), Err(Error::NotAUnit));
    }

    #[test]
    fn unit_u_round_trip() {
        for kk in [5, 7, 11] {
            let k = pk(kk);
            let u = unit_u(k).unwrap();
            let ui = u.invert_unit().unwrap();
            assert!((&u * &ui).is_one());
            assert_eq!(gauss_sum(1, k), &CycInt::x_pow(k, k.half()) * &ui);
        }
    }

    #[test]
    fn div_x_recovers_factor() {
        let k = pk(7);
        let a = &qpow(3, k) + &CycInt::from_int(k, 2);
        let b = &a * &CycInt::x_pow(k, 2);
        assert_eq!(b.div_x_pow(2).unwrap(), a);
        assert!(CycInt::one(k).div_x_pow(1).is_err());
    }

    #[test]
    fn conj_and_mul_qpow() {
        let k = pk(11);
        let a = &qpow(3, k) + &qpow(10, k).scale(&3.into());
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul_qpow(4), &a * &qpow(4, k));
        let z = a.eval_complex(Precision::Double);
        let zc = a.conj().eval_complex(Precision::Compensated);
        assert!((z.conj() - zc).norm() < 1e-12);
    }

    #[test]
    fn display_is_readable() {
        let k = pk(5);
        let a = &qpow(1, k) - &CycInt::from_int(k, 2);
        assert_eq!(a.to_string(), "-2 + q");
    }
}
