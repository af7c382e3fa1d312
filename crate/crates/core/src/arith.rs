// SPDX-License-Identifier: MIT OR Apache-2.0

//! Residue arithmetic modulo an odd prime `K`.
//!
//! `K = k + 2` is the shifted level.  Starred quantities such as `q*`, `2*`,
//! `4*` are inverses modulo `K`; the sign `κ` is `+1` when `K ≡ −1 (mod 4)`
//! and `−1` when `K ≡ 1 (mod 4)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic trial-division primality test.
pub fn is_prime(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All odd primes in the closed range `[lo, hi]`, ascending.
pub fn odd_primes_in(lo: i64, hi: i64) -> Vec<i64> {
    (lo.max(3)..=hi).filter(|&n| n % 2 == 1 && is_prime(n)).collect()
}

/// The smallest odd prime strictly greater than `n`.
pub fn next_odd_prime(n: i64) -> i64 {
    let mut m = n.max(2) + 1;
    while !(m % 2 == 1 && is_prime(m)) {
        m += 1;
    }
    m
}

/// An odd prime `K` together with the derived level and sign `κ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeK {
    modulus: i64,
}

impl PrimeK {
    /// Validates that `k_big` is an odd prime.
    pub fn new(k_big: i64) -> Result<Self> {
        if k_big < 3 || !is_prime(k_big) {
            return Err(Error::NotPrime(k_big));
        }
        Ok(PrimeK { modulus: k_big })
    }

    /// The prime `K`.
    #[inline]
    pub fn get(self) -> i64 {
        self.modulus
    }

    /// The level `k = K − 2`.
    #[inline]
    pub fn level(self) -> i64 {
        self.modulus - 2
    }

    /// `κ = +1` if `K ≡ 3 (mod 4)`, `−1` if `K ≡ 1 (mod 4)`.
    #[inline]
    pub fn kappa(self) -> i64 {
        kappa_of(self)
    }

    /// `(K − 1) / 2`, the truncation degree of ℤ′_K[x].
    #[inline]
    pub fn half(self) -> usize {
        ((self.modulus - 1) / 2) as usize
    }

    /// Canonical representative of `a` in `[0, K)`.
    #[inline]
    pub fn reduce(self, a: i64) -> i64 {
        a.rem_euclid(self.modulus)
    }

    /// Canonical representative of a big integer in `[0, K)`.
    pub fn reduce_big(self, a: &BigInt) -> i64 {
        a.mod_floor(&BigInt::from(self.modulus))
            .to_i64()
            .expect("residue fits in i64")
    }

    /// The residue class of `a`.
    pub fn residue(self, a: i64) -> Residue {
        Residue {
            value: self.reduce(a),
            modulus: self,
        }
    }

    /// Inverse of `a` in `[1, K)`.
    pub fn inv(self, a: i64) -> Result<i64> {
        mod_inv(self.residue(a)).map(|r| r.value)
    }

    /// `4*` as an element of `[0, K)`.
    pub fn inv4(self) -> i64 {
        self.inv(4).expect("K is odd")
    }

    /// `2*` as an element of `[0, K)`.
    pub fn inv2(self) -> i64 {
        (self.modulus + 1) / 2
    }

    /// `a^e mod K` for `e ≥ 0`.
    pub fn pow(self, a: i64, mut e: u64) -> i64 {
        let m = self.modulus as i128;
        let mut base = self.reduce(a) as i128;
        let mut acc: i128 = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        acc as i64
    }
}

impl fmt::Display for PrimeK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.modulus)
    }
}

/// An element of ℤ/Kℤ, stored canonically in `[0, K)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Residue {
    pub value: i64,
    pub modulus: PrimeK,
}

impl Residue {
    pub fn new(value: i64, modulus: PrimeK) -> Self {
        modulus.residue(value)
    }

    /// The signed representative in `(−K/2, K/2]`.
    pub fn centered(self) -> i64 {
        let k = self.modulus.get();
        if self.value > k / 2 {
            self.value - k
        } else {
            self.value
        }
    }
}

impl std::ops::Add for Residue {
    type Output = Residue;
    fn add(self, o: Residue) -> Residue {
        self.modulus.residue(self.value + o.value)
    }
}

impl std::ops::Sub for Residue {
    type Output = Residue;
    fn sub(self, o: Residue) -> Residue {
        self.modulus.residue(self.value - o.value)
    }
}

impl std::ops::Mul for Residue {
    type Output = Residue;
    fn mul(self, o: Residue) -> Residue {
        self.modulus.residue(self.value * o.value)
    }
}

impl std::ops::Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        self.modulus.residue(-self.value)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Multiplicative inverse modulo `K`.
pub fn mod_inv(a: Residue) -> Result<Residue> {
    let k = a.modulus.get();
    if a.value == 0 {
        return Err(Error::ZeroInverse(a.value, k));
    }
    let ext = a.value.extended_gcd(&k);
    debug_assert_eq!(ext.gcd, 1);
    Ok(a.modulus.residue(ext.x))
}

/// The unique even integer `e ∈ (−K, K)` with `a·e ≡ 1 (mod K)`.
///
/// Exactly one of `inv` and `inv − K` is even because `K` is odd; even
/// representatives preserve colour parity when shifting a summation variable.
pub fn even_inv(a: Residue) -> Result<i64> {
    let inv = mod_inv(a)?.value;
    Ok(if inv % 2 == 0 { inv } else { inv - a.modulus.get() })
}

/// Legendre symbol `(a / K)`.
pub fn legendre(a: i64, k: PrimeK) -> i64 {
    let r = k.reduce(a);
    if r == 0 {
        return 0;
    }
    if k.pow(r, ((k.get() - 1) / 2) as u64) == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol of a big integer.
pub fn legendre_big(a: &BigInt, k: PrimeK) -> i64 {
    legendre(k.reduce_big(a), k)
}

/// The check map `(num/den)^∨ = num · den*` on K-regular rationals.
pub fn rat_check(num: i64, den: i64, k: PrimeK) -> Result<Residue> {
    if den == 0 || k.reduce(den) == 0 {
        return Err(Error::DenominatorDivisibleByK {
            k: k.get(),
            degree: None,
        });
    }
    let d = mod_inv(k.residue(den))?;
    Ok(k.residue(num) * d)
}

/// The check map on an exact big rational.
pub fn rat_check_big(r: &BigRational, k: PrimeK) -> Result<Residue> {
    let den = k.reduce_big(r.denom());
    if den == 0 {
        return Err(Error::DenominatorDivisibleByK {
            k: k.get(),
            degree: None,
        });
    }
    let num = k.reduce_big(r.numer());
    rat_check(num, den, k)
}

/// `κ` for the prime `K`.
pub fn kappa_of(k: PrimeK) -> i64 {
    if k.get() % 4 == 3 {
        1
    } else {
        -1
    }
}

/// Sign of an integer as `−1, 0, 1`.
#[inline]
pub fn sign(a: i64) -> i64 {
    a.signum()
}

/// Sign of a big rational as `−1, 0, 1`.
pub fn sign_rat(r: &BigRational) -> i64 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
