// SPDX-License-Identifier: MIT OR Apache-2.0

//! Number theory of surgery presentations.
//!
//! Dedekind sums, the Rademacher Φ function on SL(2,ℤ), continued-fraction
//! chains `T^{m_t̄} S ⋯ T^{m_1} S`, exact signatures of rational symmetric
//! matrices, and first-homology orders.
//!
//! The Dedekind sum uses the odd extension in the denominator,
//! `s(q, p) = sign(p)·s(q, |p|)`, so that all lens and Seifert phases hold
//! for negative `p` as well.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{rat_check_big, PrimeK, Residue};
use crate::error::{Error, Result};
use crate::surgery::ManifoldSpec;

/// An integer matrix `[[p, r], [q, s]]` with `ps − qr = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SL2 {
    pub p: i64,
    pub r: i64,
    pub q: i64,
    pub s: i64,
}

impl SL2 {
    /// Validates the determinant.
    pub fn new(p: i64, r: i64, q: i64, s: i64) -> Result<Self> {
        if p * s - q * r != 1 {
            return Err(Error::InvalidSpec(format!(
                "[[{p}, {r}], [{q}, {s}]] has determinant {}",
                p * s - q * r
            )));
        }
        Ok(SL2 { p, r, q, s })
    }

    pub const IDENTITY: SL2 = SL2 {
        p: 1,
        r: 0,
        q: 0,
        s: 1,
    };

    /// `S = [[0, −1], [1, 0]]`.
    pub const S: SL2 = SL2 {
        p: 0,
        r: -1,
        q: 1,
        s: 0,
    };

    /// `T^m = [[1, m], [0, 1]]`.
    pub fn t_pow(m: i64) -> SL2 {
        SL2 {
            p: 1,
            r: m,
            q: 0,
            s: 1,
        }
    }

    /// `T^m S = [[m, −1], [1, 0]]`.
    pub fn ts(m: i64) -> SL2 {
        SL2::t_pow(m).mul(&SL2::S)
    }

    /// Matrix product `self · o`.
    pub fn mul(&self, o: &SL2) -> SL2 {
        SL2 {
            p: self.p * o.p + self.r * o.q,
            r: self.p * o.r + self.r * o.s,
            q: self.q * o.p + self.s * o.q,
            s: self.q * o.r + self.s * o.s,
        }
    }

    pub fn neg(&self) -> SL2 {
        SL2 {
            p: -self.p,
            r: -self.r,
            q: -self.q,
            s: -self.s,
        }
    }
}

impl fmt::Display for SL2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.r, self.q, self.s)
    }
}

/// A chain of framed unknots: `U = T^{m_t̄} S ⋯ T^{m_1} S`, stored with
/// `m_1` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Chain {
    pub m: Vec<i64>,
}

impl Chain {
    pub fn new(m: Vec<i64>) -> Self {
        Chain { m }
    }

    /// Partial products `U_t = T^{m_t} S ⋯ T^{m_1} S` for `t = 1..=t̄`.
    pub fn partials(&self) -> Vec<SL2> {
        let mut u = SL2::IDENTITY;
        self.m
            .iter()
            .map(|&m| {
                u = SL2::ts(m).mul(&u);
                u
            })
            .collect()
    }

    /// The full product `U`.
    pub fn matrix(&self) -> SL2 {
        self.partials().last().copied().unwrap_or(SL2::IDENTITY)
    }

    /// `Σ_{t<t̄} sign(p_t/q_t)` over intermediate partial products.
    pub fn intermediate_sign_sum(&self) -> Result<i64> {
        let parts = self.partials();
        let mut acc = 0;
        for u in parts.iter().take(parts.len().saturating_sub(1)) {
            if u.q == 0 {
                return Err(Error::ZeroLowerLeft);
            }
            acc += (u.p * u.q).signum();
        }
        Ok(acc)
    }
}

/// Expands `p/q` (with `q ≥ 1`, `gcd(p, q) = 1`) into a chain with ceiling
/// quotients; the result is re-verified by an exact matrix product.
pub fn cf_expand(p: i64, q: i64) -> Result<Chain> {
    if q < 1 {
        return Err(Error::InvalidSpec(format!("cf_expand needs q ≥ 1, got {q}")));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::NotCoprime(p, q));
    }
    let (mut a, mut b) = (p, q);
    let mut rev = Vec::new();
    loop {
        if b == 1 {
            rev.push(a);
            break;
        }
        let m = -Integer::div_floor(&-a, &b);
        rev.push(m);
        let next = m * b - a;
        a = b;
        b = next;
    }
    rev.reverse();
    let chain = Chain::new(rev);
    let u = chain.matrix();
    assert!(
        u.p == p && u.q == q,
        "chain {:?} does not reproduce ({p}, {q})",
        chain.m
    );
    Ok(chain)
}

fn sawtooth(num: &BigInt, den: &BigInt) -> BigRational {
    let r = num.mod_floor(den);
    if r.is_zero() {
        BigRational::zero()
    } else {
        BigRational::new(r, den.clone()) - BigRational::new(BigInt::one(), BigInt::from(2))
    }
}

/// Dedekind sum `s(q, p)` with the odd extension in `p`.
pub fn dedekind_sum(q: i64, p: i64) -> Result<BigRational> {
    if p == 0 || q.gcd(&p) != 1 {
        return Err(Error::NotCoprime(q, p));
    }
    let ap = BigInt::from(p.abs());
    let qb = BigInt::from(q);
    let mut acc = BigRational::zero();
    for i in 1..p.abs() {
        let ib = BigInt::from(i);
        acc += sawtooth(&ib, &ap) * sawtooth(&(&qb * &ib), &ap);
    }
    Ok(if p < 0 { -acc } else { acc })
}

/// `s^∨(q, p)`.
pub fn dedekind_vee(q: i64, p: i64, k: PrimeK) -> Result<Residue> {
    rat_check_big(&dedekind_sum(q, p)?, k)
}

/// `Φ(U) = (p + s)/q − 12·s(p, q)`, asserted integral.
pub fn rademacher_phi(u: &SL2) -> Result<i64> {
    if u.q == 0 {
        return Err(Error::ZeroLowerLeft);
    }
    let v = BigRational::new(BigInt::from(u.p + u.s), BigInt::from(u.q))
        - dedekind_sum(u.p, u.q)? * BigRational::from_integer(BigInt::from(12));
    if !v.is_integer() {
        return Err(Error::NonIntegerPhi(format!("Φ({u}) = {v}")));
    }
    Ok(i64::try_from(v.to_integer()).map_err(|_| Error::NonIntegerPhi(v.to_string()))?)
}

/// Checks `Φ(U) = Σ m_t − 3·Σ_{t<t̄} sign(p_t/q_t)`.
pub fn phi_chain_check(c: &Chain) -> Result<bool> {
    let phi = rademacher_phi(&c.matrix())?;
    let rhs = c.m.iter().sum::<i64>() - 3 * c.intermediate_sign_sum()?;
    Ok(phi == rhs)
}

/// `sign(L̃) = sign(L) + Σ_j Σ_{t<t̄⁽ʲ⁾} sign(p_t⁽ʲ⁾/q_t⁽ʲ⁾)`.
pub fn signature_correction(chains: &[Chain], l_sign: i64) -> Result<i64> {
    let mut acc = l_sign;
    for c in chains {
        acc += c.intermediate_sign_sum()?;
    }
    Ok(acc)
}

/// Signature of a symmetric rational matrix by exact congruence
/// diagonalisation.
pub fn signature(matrix: &[Vec<BigRational>]) -> i64 {
    let mut m: Vec<Vec<BigRational>> = matrix.to_vec();
    let (mut pos, mut neg) = (0i64, 0i64);
    while !m.is_empty() {
        let n = m.len();
        let mut piv = (0..n).find(|&i| !m[i][i].is_zero());
        if piv.is_none() {
            let off = (0..n).find_map(|i| (0..n).find(|&j| !m[i][j].is_zero()).map(|j| (i, j)));
            let Some((i, j)) = off else { break };
            // row_i += row_j, col_i += col_j makes the (i,i) entry 2·m_ij ≠ 0.
            for c in 0..n {
                let v = m[j][c].clone();
                m[i][c] += v;
            }
            for r in 0..n {
                let v = m[r][j].clone();
                m[r][i] += v;
            }
            piv = Some(i);
        }
        let piv = piv.expect("pivot found");
        m.swap(0, piv);
        for row in m.iter_mut() {
            row.swap(0, piv);
        }
        let d = m[0][0].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let next: Vec<Vec<BigRational>> = (1..n)
            .map(|i| {
                (1..n)
                    .map(|j| &m[i][j] - &m[i][0] * &m[0][j] / &d)
                    .collect()
            })
            .collect();
        m = next;
    }
    pos - neg
}

/// Seifert data `X(p₁/q₁, …, p_N/q_N)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeifertData {
    pub fractions: Vec<(i64, i64)>,
}

impl SeifertData {
    /// Validates coprimality, `p_j ≠ 0`, and `H ≠ 0`.
    pub fn new(fractions: Vec<(i64, i64)>) -> Result<Self> {
        if fractions.is_empty() {
            return Err(Error::InvalidSpec("a Seifert space needs at least one fibre".into()));
        }
        for &(p, q) in &fractions {
            if p == 0 {
                return Err(Error::InvalidSpec("fibre with p = 0".into()));
            }
            if p.gcd(&q) != 1 {
                return Err(Error::NotCoprime(p, q));
            }
        }
        let s = SeifertData { fractions };
        s.p_product()?;
        if s.h()? == 0 {
            return Err(Error::HZero);
        }
        Ok(s)
    }

    /// `P = Π p_j`.
    pub fn p_product(&self) -> Result<i64> {
        self.fractions.iter().try_fold(1i64, |acc, &(p, _)| {
            acc.checked_mul(p)
                .ok_or_else(|| Error::InvalidSpec("P overflows 64 bits".into()))
        })
    }

    /// `H = P·Σ q_j/p_j`.
    pub fn h(&self) -> Result<i64> {
        let mut acc = 0i64;
        for (j, &(_, q)) in self.fractions.iter().enumerate() {
            let mut term = q;
            for (i, &(p, _)) in self.fractions.iter().enumerate() {
                if i != j {
                    term = term
                        .checked_mul(p)
                        .ok_or_else(|| Error::InvalidSpec("H overflows 64 bits".into()))?;
                }
            }
            acc = acc
                .checked_add(term)
                .ok_or_else(|| Error::InvalidSpec("H overflows 64 bits".into()))?;
        }
        Ok(acc)
    }

    /// `sign(H/P)`.
    pub fn sigma(&self) -> Result<i64> {
        Ok(self.h()?.signum() * self.p_product()?.signum())
    }

    /// Linking matrix of the star link: a 0-framed centre linked once with
    /// each fibre framed `p_j/q_j`.
    pub fn linking_matrix(&self) -> Vec<Vec<BigRational>> {
        let n = self.fractions.len() + 1;
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (j, &(p, q)) in self.fractions.iter().enumerate() {
            m[0][j + 1] = BigRational::one();
            m[j + 1][0] = BigRational::one();
            m[j + 1][j + 1] = BigRational::new(BigInt::from(p), BigInt::from(q));
        }
        m
    }

    /// `−sign(H/P) + Σ sign(q_j/p_j)`.
    pub fn link_signature(&self) -> Result<i64> {
        Ok(-self.sigma()? + self.fractions.iter().map(|&(p, q)| (p * q).signum()).sum::<i64>())
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fractions.iter().map(|(p, q)| format!("{p}/{q}")).collect();
        write!(f, "X({})", parts.join(","))
    }
}

/// `|H₁(M, ℤ)|` for the built-in families.
pub fn h1_order(m: &ManifoldSpec) -> Result<u64> {
    match m {
        ManifoldSpec::Lens { p, q } => {
            if *p == 0 {
                return Err(Error::NotRhs(format!("L({p},{q})")));
            }
            Ok(p.unsigned_abs())
        }
        ManifoldSpec::Seifert { fractions } => {
            let s = SeifertData::new(fractions.clone()).map_err(|e| match e {
                Error::HZero => Error::NotRhs(m.id()),
                other => other,
            })?;
            Ok(s.h()?.unsigned_abs())
        }
        ManifoldSpec::P1 { framings, .. } => {
            let mut acc: u64 = 1;
            for &p in framings {
                if p == 0 {
                    return Err(Error::NotRhs(m.id()));
                }
                acc = acc
                    .checked_mul(p.unsigned_abs())
                    .ok_or_else(|| Error::InvalidSpec("|H₁| overflows 64 bits".into()))?;
            }
            Ok(acc)
        }
    }
}

/// Sign of the rational `p/q` (`q ≠ 0`).
pub fn sign_frac(p: i64, q: i64) -> i64 {
    p.signum() * q.signum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn dedekind_examples() {
        assert_eq!(dedekind_sum(1, 2).unwrap(), rat(0, 1));
        assert_eq!(dedekind_sum(1, 3).unwrap(), rat(1, 18));
        assert_eq!(dedekind_sum(2, 4), Err(Error::NotCoprime(2, 4)));
        assert_eq!(dedekind_sum(1, -3).unwrap(), rat(-1, 18));
    }

    #[test]
    fn dedekind_vee_examples() {
        let k5 = PrimeK::new(5).unwrap();
        assert_eq!(dedekind_vee(1, 3, k5).unwrap().value, 2);
        assert_eq!(dedekind_vee(1, 2, PrimeK::new(7).unwrap()).unwrap().value, 0);
        assert!(matches!(
            dedekind_vee(1, 3, PrimeK::new(3).unwrap()),
            Err(Error::DenominatorDivisibleByK { .. })
        ));
    }

    #[test]
    fn phi_examples() {
        for m in -6..=6 {
            assert_eq!(rademacher_phi(&SL2::ts(m)).unwrap(), m);
        }
        assert_eq!(rademacher_phi(&SL2::S).unwrap(), 0);
        assert_eq!(rademacher_phi(&SL2::t_pow(3)), Err(Error::ZeroLowerLeft));
    }

    #[test]
    fn cf_expand_examples() {
        assert_eq!(cf_expand(7, 1).unwrap().m, vec![7]);
        assert_eq!(cf_expand(3, 2).unwrap().m, vec![2, 2]);
        assert_eq!(cf_expand(1, 1).unwrap().m, vec![1]);
        assert_eq!(
            cf_expand(3, 2).unwrap().matrix(),
            SL2::new(3, -2, 2, -1).unwrap()
        );
    }

    #[test]
    fn phi_chain_and_signature_correction() {
        assert!(phi_chain_check(&cf_expand(5, 1).unwrap()).unwrap());
        let c = cf_expand(3, 2).unwrap();
        assert!(phi_chain_check(&c).unwrap());
        assert_eq!(signature_correction(&[c], 0).unwrap(), 1);
        assert_eq!(signature_correction(&[cf_expand(4, 1).unwrap()], -1).unwrap(), -1);
    }

    #[test]
    fn signature_examples() {
        let m = |v: Vec<Vec<i64>>| -> Vec<Vec<BigRational>> {
            v.into_iter()
                .map(|r| r.into_iter().map(|x| rat(x, 1)).collect())
                .collect()
        };
        assert_eq!(signature(&m(vec![vec![0, 1], vec![1, 0]])), 0);
        assert_eq!(signature(&m(vec![vec![2, 1], vec![1, 3]])), 2);
        assert_eq!(signature(&m(vec![vec![-1]])), -1);
    }

    #[test]
    fn seifert_data_examples() {
        let s = SeifertData::new(vec![(2, 1), (3, 1), (5, -4)]).unwrap();
        assert_eq!(s.h().unwrap(), 1);
        assert_eq!(s.p_product().unwrap(), 30);
        let t = SeifertData::new(vec![(2, 1), (3, 1), (5, 1)]).unwrap();
        assert_eq!(t.h().unwrap(), 31);
        assert_eq!(SeifertData::new(vec![(2, 1), (2, -1)]), Err(Error::HZero));
        for s in [s, t] {
            assert_eq!(signature(&s.linking_matrix()), s.link_signature().unwrap());
        }
    }

    #[test]
    fn h1_examples() {
        assert_eq!(h1_order(&ManifoldSpec::Lens { p: 7, q: 2 }).unwrap(), 7);
        assert_eq!(
            h1_order(&ManifoldSpec::Seifert {
                fractions: vec![(2, 1), (3, 1), (5, -4)]
            })
            .unwrap(),
            1
        );
        assert!(matches!(
            h1_order(&ManifoldSpec::Lens { p: 0, q: 1 }),
            Err(Error::NotRhs(_))
        ));
    }
}
