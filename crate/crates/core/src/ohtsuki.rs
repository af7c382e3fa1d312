// SPDX-License-Identifier: MIT OR Apache-2.0

//! The identity `♢(|H₁|·(|H₁|/K)·Z′(M;k)) = [Σ λₙ xⁿ]^∨` and the recovery of
//! `λₙ` from its residues at many primes.
//!
//! Each prime `K` with `K ∤ |H₁|` pins `λₙ mod K` for `n ≤ (K−1)/2` through
//! the left-hand side alone.  [`reconstruct_lambda`] combines those residues
//! by CRT and recovers the rational by half-extended Euclid, then checks the
//! result against primes it did not use.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{legendre, next_odd_prime, PrimeK};
use crate::closedform::{lens_lambda_series, lens_zprime, seifert_lambda_series, seifert_zprime};
use crate::cyclotomic::CycInt;
use crate::error::{Error, Result};
use crate::jones::JonesRegistry;
use crate::nt::{h1_order, SeifertData};
use crate::series::{s_mul, vee, LambdaSeries, Provenance, RatSeries, TruncPoly, DEFAULT_CAP};
use crate::surgery::{exact_p1, ManifoldSpec};

/// Lens spaces `L(p, q)` with `2 ≤ |p| ≤ p_max`, `1 ≤ q < |p|`, `gcd(p, q) = 1`,
/// ordered by `|p|`, then sign (positive first), then `q`.
pub fn lens_family(p_max: i64) -> Vec<ManifoldSpec> {
    let mut out = Vec::new();
    for ap in 2..=p_max {
        for p in [ap, -ap] {
            for q in 1..ap {
                if ap.gcd(&q) == 1 {
                    out.push(ManifoldSpec::Lens { p, q });
                }
            }
        }
    }
    out
}

/// The built-in Seifert rational homology spheres used by the batch checks.
pub fn seifert_family() -> Vec<ManifoldSpec> {
    [
        vec![(2, 1), (3, 1), (5, -4)],
        vec![(3, 1), (4, 1), (5, 1)],
        vec![(2, 1), (3, 1), (5, 1)],
        vec![(2, -1), (3, 1), (7, 1)],
        vec![(3, 2), (5, 3)],
        vec![(2, 1), (3, 1), (7, -6)],
        vec![(-2, 1), (3, 1), (5, 1)],
    ]
    .into_iter()
    .map(|fractions| ManifoldSpec::Seifert { fractions })
    .collect()
}

/// Exact `Z′(M;k)` from the closed form of the manifold's family.
pub fn zprime_exact(m: &ManifoldSpec, k: PrimeK, registry: &JonesRegistry) -> Result<CycInt> {
    m.validate()?;
    match m {
        ManifoldSpec::Lens { p, q } => {
            if p.abs() == 1 {
                return Ok(CycInt::one(k));
            }
            lens_zprime(*p, *q, k)
        }
        ManifoldSpec::Seifert { fractions } => seifert_zprime(&SeifertData::new(fractions.clone())?, k),
        ManifoldSpec::P1 { .. } => exact_p1(m, k, registry),
    }
}

/// The closed-form λ-series to cap `d`.  `(p_j, 1)` surgery has a closed form
/// only on the unknot and unlinks, where it is a connected sum of lens spaces.
pub fn lambda_closed_form(m: &ManifoldSpec, d: usize) -> Result<LambdaSeries> {
    m.validate()?;
    match m {
        ManifoldSpec::Lens { p, q } => {
            let mut l = lens_lambda_series(*p, *q, d)?;
            l.manifold = m.id();
            Ok(l)
        }
        ManifoldSpec::Seifert { fractions } => {
            let mut l = seifert_lambda_series(&SeifertData::new(fractions.clone())?, d)?;
            l.manifold = m.id();
            Ok(l)
        }
        ManifoldSpec::P1 { jones, framings } => {
            let trivial = match jones.as_str() {
                "unknot" => framings.len() == 1,
                "unlink" => true,
                _ => false,
            };
            if !trivial {
                return Err(Error::Unsupported(format!(
                    "no closed-form λ-series for {m}; use reconstruction"
                )));
            }
            let mut acc = RatSeries::one(d);
            for &p in framings {
                acc = s_mul(&acc, &lens_lambda_series(-p, 1, d)?.as_series());
            }
            LambdaSeries::closed_form(m.id(), acc)
        }
    }
}

/// `♢(|H₁|·(|H₁|/K)·Z′(M;k))`.
pub fn diamond_side(m: &ManifoldSpec, k: PrimeK, registry: &JonesRegistry) -> Result<TruncPoly> {
    let h1 = h1_order(m)?;
    let h1k = (h1 % k.get() as u64) as i64;
    if h1k == 0 {
        return Err(Error::H1DivisibleByK {
            h1: h1 as i64,
            k: k.get(),
        });
    }
    let z = zprime_exact(m, k, registry)?;
    Ok(z.diamond().scale(h1k * legendre(h1k, k)))
}

/// `[Σ λₙ xⁿ]^∨` truncated at degree `(K−1)/2`.
pub fn vee_side(lambda: &LambdaSeries, k: PrimeK) -> Result<TruncPoly> {
    let h = k.half();
    if lambda.n_max() < h {
        return Err(Error::InsufficientTerms {
            needed: h,
            have: lambda.n_max(),
        });
    }
    vee(&lambda.as_series().truncate(h), k)
}

/// Where the right-hand side's λ-series comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LambdaSource {
    ClosedForm,
    Reconstruction,
}

/// Outcome of one `(M, K)` comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    Unequal,
    /// The prime is outside the hypotheses (`K` divides `|H₁|` or a
    /// framing the closed form needs to invert).
    Skipped(String),
    /// A computation failed; the message is recorded.
    Error(String),
}

impl Verdict {
    fn from_error(e: &Error) -> Self {
        match e {
            Error::H1DivisibleByK { .. } | Error::PDivisibleByK { .. } => Verdict::Skipped(e.to_string()),
            _ => Verdict::Error(e.to_string()),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Equal => f.write_str("equal"),
            Verdict::Unequal => f.write_str("unequal"),
            Verdict::Skipped(e) => write!(f, "skipped: {e}"),
            Verdict::Error(e) => write!(f, "error: {e}"),
        }
    }
}

/// One row of an identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub manifold: String,
    pub k: i64,
    pub lhs: Option<TruncPoly>,
    pub rhs: Option<TruncPoly>,
    pub verdict: Verdict,
    pub first_mismatch: Option<usize>,
    /// Whether `K > |H₁|` (the stronger range condition) held; only
    /// `gcd(|H₁|, K) = 1` is required.
    pub k_exceeds_h1: bool,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Equal
    }
}

fn compare(m: &ManifoldSpec, k: PrimeK, lambda: &LambdaSeries, registry: &JonesRegistry) -> IdentityReport {
    let h1 = h1_order(m).unwrap_or(0);
    let mut report = IdentityReport {
        manifold: m.id(),
        k: k.get(),
        lhs: None,
        rhs: None,
        verdict: Verdict::Equal,
        first_mismatch: None,
        k_exceeds_h1: (k.get() as u64) > h1,
    };
    let lhs = match diamond_side(m, k, registry) {
        Ok(l) => l,
        Err(e) => {
            report.verdict = Verdict::from_error(&e);
            return report;
        }
    };
    let rhs = match vee_side(lambda, k) {
        Ok(r) => r,
        Err(e) => {
            report.lhs = Some(lhs);
            report.verdict = Verdict::from_error(&e);
            return report;
        }
    };
    report.first_mismatch = lhs.first_mismatch(&rhs);
    if report.first_mismatch.is_some() {
        report.verdict = Verdict::Unequal;
    }
    report.lhs = Some(lhs);
    report.rhs = Some(rhs);
    report
}

/// Checks the identity at each prime; per-prime failures are recorded in the
/// reports, never thrown.  Reports come back in the order of `primes`.
pub fn verify_identity(
    m: &ManifoldSpec,
    primes: &[PrimeK],
    source: LambdaSource,
    registry: &JonesRegistry,
) -> Vec<IdentityReport> {
    let d = primes.iter().map(|k| k.half()).max().unwrap_or(0).max(DEFAULT_CAP);
    let lambda = match source {
        LambdaSource::ClosedForm => lambda_closed_form(m, d),
        LambdaSource::Reconstruction => {
            let n_max = primes.iter().map(|k| k.half()).max().unwrap_or(0);
            reconstruct_lambda(m, primes, n_max, &ReconstructOptions::default(), registry)
                .map(|r| r.as_lambda_series())
        }
    };
    match lambda {
        Ok(lambda) => primes
            .par_iter()
            .map(|&k| compare(m, k, &lambda, registry))
            .collect(),
        Err(e) => primes
            .iter()
            .map(|&k| IdentityReport {
                manifold: m.id(),
                k: k.get(),
                lhs: None,
                rhs: None,
                verdict: Verdict::from_error(&e),
                first_mismatch: None,
                k_exceeds_h1: (k.get() as u64) > h1_order(m).unwrap_or(0),
            })
            .collect(),
    }
}

/// Rational reconstruction: the unique `a/b ≡ r (mod m)` with `|a| ≤ n_bound`
/// and `0 < b ≤ d_bound`, if any (half-extended Euclid).
pub fn rational_reconstruction(
    r: &BigInt,
    m: &BigInt,
    n_bound: &BigInt,
    d_bound: &BigInt,
) -> Option<BigRational> {
    let r = r.mod_floor(m);
    let (mut r0, mut r1) = (m.clone(), r);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > n_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > d_bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// `(r, m)` combined with `(a, K)` by CRT.
fn crt_step(r: &BigInt, m: &BigInt, a: i64, k: i64) -> (BigInt, BigInt) {
    let kb = BigInt::from(k);
    let ext = m.extended_gcd(&kb);
    debug_assert!(ext.gcd.is_one());
    // r + m·t with t ≡ (a − r)·m^{-1} (mod K)
    let t = ((BigInt::from(a) - r) * ext.x).mod_floor(&kb);
    let new_m = m * &kb;
    ((r + m * t).mod_floor(&new_m), new_m)
}

/// Residue of a rational modulo `K`, if `K` does not divide the denominator.
fn rat_mod(v: &BigRational, k: i64) -> Option<i64> {
    let kb = BigInt::from(k);
    let d = v.denom().mod_floor(&kb);
    if d.is_zero() {
        return None;
    }
    let inv = d.extended_gcd(&kb).x;
    (v.numer() * inv).mod_floor(&kb).to_i64()
}

/// Options for [`reconstruct_lambda`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructOptions {
    /// Consume primes beyond the given list until the reconstruction is
    /// stable across two consecutive additions.
    pub extend: bool,
    /// Maximum number of extra primes to consume.
    pub max_extra: usize,
    /// Number of unused primes that must agree with the result.
    pub held_out: usize,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        ReconstructOptions {
            extend: true,
            max_extra: 64,
            held_out: 2,
        }
    }
}

/// One reconstructed coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructedCoefficient {
    pub n: usize,
    pub value: BigRational,
    /// Product of the primes combined.
    pub modulus: BigInt,
    pub primes: Vec<i64>,
    pub held_out: Vec<i64>,
    /// `2^{4n}·n!·(2n)!·(9n)!·|H₁|ⁿ·λₙ ∈ ℤ`.
    pub integrality_bound_ok: bool,
    /// The denominator of `|H₁|ⁿ·λₙ` has only prime factors `≤ 2n`.
    pub small_prime_denominator_ok: bool,
}

/// Reconstructed `λ₀..λ_{n_max}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructionResult {
    pub manifold: String,
    pub n_max: usize,
    pub coefficients: Vec<ReconstructedCoefficient>,
}

impl ReconstructionResult {
    pub fn lambda(&self) -> Vec<BigRational> {
        self.coefficients.iter().map(|c| c.value.clone()).collect()
    }

    pub fn as_lambda_series(&self) -> LambdaSeries {
        LambdaSeries {
            manifold: self.manifold.clone(),
            lambda: self.lambda(),
            provenance: Provenance::Reconstruction,
        }
    }

    pub fn bounds_ok(&self) -> bool {
        self.coefficients
            .iter()
            .all(|c| c.integrality_bound_ok && c.small_prime_denominator_ok)
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `2^{4n}·n!·(2n)!·(9n)!·|H₁|ⁿ`.
pub fn integrality_multiplier(n: usize, h1: u64) -> BigInt {
    BigInt::from(2).pow(4 * n as u32)
        * factorial(n)
        * factorial(2 * n)
        * factorial(9 * n)
        * BigInt::from(h1).pow(n as u32)
}

/// Whether every prime factor of `d` is at most `bound`.
pub fn smooth(d: &BigInt, bound: u64) -> bool {
    let mut d = d.abs();
    let mut p = 2u64;
    while p <= bound {
        let pb = BigInt::from(p);
        while (&d % &pb).is_zero() {
            d /= &pb;
        }
        p += 1;
    }
    d.is_one()
}

/// Diamond sides at each prime, computed in parallel and keyed by `K`.
fn diamond_table(
    m: &ManifoldSpec,
    primes: &[i64],
    registry: &JonesRegistry,
) -> Result<BTreeMap<i64, TruncPoly>> {
    let rows: Vec<(i64, Result<TruncPoly>)> = primes
        .par_iter()
        .map(|&k| (k, PrimeK::new(k).and_then(|pk| diamond_side(m, pk, registry))))
        .collect();
    let mut out = BTreeMap::new();
    for (k, r) in rows {
        out.insert(k, r?);
    }
    Ok(out)
}

/// Recovers `λ₀..λ_{n_max}` from diamond sides at the given primes.
///
/// A prime `K` contributes to `λₙ` when `n ≤ (K−1)/2` and `K ∤ |H₁|`.  A
/// value is accepted once two consecutive prime additions reproduce it;
/// with `extend`, primes after the list are consumed as needed.  The result
/// is then checked at `held_out` further primes.
pub fn reconstruct_lambda(
    m: &ManifoldSpec,
    primes: &[PrimeK],
    n_max: usize,
    opts: &ReconstructOptions,
    registry: &JonesRegistry,
) -> Result<ReconstructionResult> {
    let h1 = h1_order(m)?;
    let mut given: Vec<i64> = primes.iter().map(|k| k.get()).collect();
    given.sort_unstable();
    given.dedup();
    if given.len() != primes.len() {
        return Err(Error::InvalidSpec("primes must be distinct".into()));
    }
    let eligible = |k: i64, n: usize| -> bool { (k - 1) / 2 >= n as i64 && h1 % k as u64 != 0 };

    // Pool of primes: the list, then extension primes, then held-out primes.
    let mut pool = given.clone();
    let mut next = given.last().copied().unwrap_or(3);
    let extra = if opts.extend { opts.max_extra } else { 0 } + opts.held_out + 2 * n_max + 4;
    for _ in 0..extra {
        next = next_odd_prime(next);
        pool.push(next);
    }
    let table = diamond_table(m, &pool, registry)?;
    let residue = |k: i64, n: usize| -> i64 { table[&k].coeffs()[n] };

    let mut coefficients = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let source = if opts.extend { &pool } else { &given };
        let usable: Vec<i64> = source.iter().copied().filter(|&k| eligible(k, n)).collect();
        let limit = if opts.extend {
            usable.len().saturating_sub(opts.held_out)
        } else {
            usable.len()
        };
        let mut r = BigInt::zero();
        let mut modulus = BigInt::one();
        let mut prev: Option<BigRational> = None;
        let mut accepted: Option<(BigRational, usize)> = None;
        for (i, &k) in usable.iter().take(limit).enumerate() {
            (r, modulus) = crt_step(&r, &modulus, residue(k, n), k);
            let bound = (&modulus / BigInt::from(2)).sqrt();
            let cur = rational_reconstruction(&r, &modulus, &bound, &bound);
            if cur.is_some() && cur == prev {
                accepted = Some((cur.expect("checked"), i + 1));
                break;
            }
            prev = cur;
        }
        let Some((value, used)) = accepted else {
            return Err(Error::InsufficientModulus { n });
        };
        let used_primes: Vec<i64> = usable[..used].to_vec();
        for &k in &used_primes {
            if rat_mod(&value, k) != Some(residue(k, n)) {
                return Err(Error::InconsistentResidues { n, k });
            }
        }
        let held: Vec<i64> = pool
            .iter()
            .copied()
            .filter(|&k| eligible(k, n) && !used_primes.contains(&k) && k > used_primes[used - 1])
            .take(opts.held_out)
            .collect();
        for &k in &held {
            if rat_mod(&value, k) != Some(residue(k, n)) {
                return Err(Error::InconsistentResidues { n, k });
            }
        }
        let scaled = &value * BigRational::from_integer(integrality_multiplier(n, h1));
        let h1n = &value * BigRational::from_integer(BigInt::from(h1).pow(n as u32));
        coefficients.push(ReconstructedCoefficient {
            n,
            value,
            modulus,
            primes: used_primes,
            held_out: held,
            integrality_bound_ok: scaled.is_integer(),
            small_prime_denominator_ok: smooth(h1n.denom(), 2 * n as u64),
        });
    }
    Ok(ReconstructionResult {
        manifold: m.id(),
        n_max,
        coefficients,
    })
}
