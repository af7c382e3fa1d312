// SPDX-License-Identifier: MIT OR Apache-2.0

//! Independent oracles shared by the integration tests.  Nothing here calls
//! the library's own evaluation paths for the quantity being checked; the
//! library is used only for exact ring arithmetic.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quantum_rhs::arith::legendre;
use quantum_rhs::cyclotomic::odd_gauss_moment;
use quantum_rhs::{CycInt, PrimeK, Result};

pub fn pk(k: i64) -> PrimeK {
    PrimeK::new(k).expect("odd prime")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

// ---------------------------------------------------------------------------
// Gauss sums

/// The normalised odd Gauss moment
/// `e^{iπ(κ−1)/4}/√K · Σ′ q̌^{c α²} α^{2m} · x^m` with `c = p q*`, computed
/// exactly: the normalising constant equals `legendre(c) / Σ′ q̌^{c α²}`, and
/// both sums are divided by the matching power of `x` before inverting the
/// unit left over from the `m = 0` sum.
pub fn normalized_gauss_moment(p: i64, q: i64, m: usize, k: PrimeK) -> Result<CycInt> {
    let c = k.reduce(p * k.inv(q)?);
    let h = k.half();
    let m0 = odd_gauss_moment(c, 0, k);
    let unit = m0.div_x_pow(h)?.invert_unit()?;
    let mm = odd_gauss_moment(c, m as u32, k).div_x_pow(h - m)?;
    Ok((&mm * &unit).scale(&BigInt::from(legendre(c, k))))
}

/// Numeric quadratic Gauss sum `Σ_{a<K} e^{2πi a²/K}`.
pub fn gauss_sum_numeric(k: i64) -> Complex64 {
    (0..k)
        .map(|a| Complex64::from_polar(1.0, 2.0 * PI * ((a * a) % k) as f64 / k as f64))
        .sum()
}

// ---------------------------------------------------------------------------
// Surgery on framed chains of unknots

/// Framings of a linear chain realising `r` surgery on the unknot, from
/// the expansion `r = a₁ − 1/(a₂ − 1/(…))` with `aᵢ = ⌈rᵢ⌉`.
pub fn chain_framings(r: &BigRational) -> Vec<i64> {
    let mut out = Vec::new();
    let mut r = r.clone();
    loop {
        let a = r.ceil();
        out.push(a.to_integer().try_into().expect("small framing"));
        let rest = &a - &r;
        if rest.is_zero() {
            return out;
        }
        r = rest.recip();
    }
}

/// Signature of a symmetric integer matrix via a floating eigen-decomposition.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 0;
    }
    let mat = DMatrix::from_fn(n, n, |i, j| m[i][j] as f64);
    let eig = mat.symmetric_eigen();
    eig.eigenvalues
        .iter()
        .map(|&l| {
            assert!(l.abs() > 1e-9, "degenerate linking matrix");
            l.signum() as i64
        })
        .sum()
}

fn sin_frac(a: i64, k: i64) -> f64 {
    (PI * a as f64 / k as f64).sin()
}

/// `Z(M;k)/Z(S³;k)` for surgery on a tree of unknots (edges are Hopf
/// clasps), by brute force over all colourings `1..K−1`:
///
/// `(2/K)^{n/2} e^{−3πi(K−2)σ/(4K)} Σ_c Π_v e^{iπ f_v (c_v²−1)/(2K)} sin(πc_v/K)
///  [c_v]^{1−deg v} Π_{uv} [c_u c_v]`, with `[n] = sin(πn/K)/sin(π/K)`.
pub fn rt_brute_force(framings: &[i64], edges: &[(usize, usize)], k: i64) -> Complex64 {
    let n = framings.len();
    let mut deg = vec![0i32; n];
    let mut lk = vec![vec![0i64; n]; n];
    for (i, &f) in framings.iter().enumerate() {
        lk[i][i] = f;
    }
    for &(a, b) in edges {
        deg[a] += 1;
        deg[b] += 1;
        lk[a][b] = 1;
        lk[b][a] = 1;
    }
    let sigma = signature(&lk);
    let s1 = sin_frac(1, k);
    let qint = |a: i64| sin_frac(a, k) / s1;
    let mut total = Complex64::new(0.0, 0.0);
    let mut c = vec![1i64; n];
    'outer: loop {
        let mut term = Complex64::new(1.0, 0.0);
        for v in 0..n {
            let phase = PI * (framings[v] * (c[v] * c[v] - 1)) as f64 / (2.0 * k as f64);
            term *= Complex64::from_polar(1.0, phase) * sin_frac(c[v], k) * qint(c[v]).powi(1 - deg[v]);
        }
        for &(a, b) in edges {
            term *= qint(c[a] * c[b]);
        }
        total += term;
        for v in 0..n {
            if c[v] < k - 1 {
                c[v] += 1;
                continue 'outer;
            }
            c[v] = 1;
        }
        break;
    }
    let kf = k as f64;
    let phase = -3.0 * PI * ((k - 2) * sigma) as f64 / (4.0 * kf);
    (2.0 / kf).powf(n as f64 / 2.0) * Complex64::from_polar(1.0, phase) * total
}

/// `Z(L(p,q))` via the brute-force chain oracle; `L(p,q)` is `−p/q`
/// surgery on the unknot.
pub fn lens_rt_brute_force(p: i64, q: i64, k: i64) -> Complex64 {
    let f = chain_framings(&rat(-p, q));
    let edges: Vec<_> = (1..f.len()).map(|i| (i - 1, i)).collect();
    rt_brute_force(&f, &edges, k)
}

// ---------------------------------------------------------------------------
// Rational power series in x

/// Coefficients of `(1 + x)^a` to degree `< d`.
pub fn binomial_series(a: &BigRational, d: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(d);
    let mut c = BigRational::one();
    for n in 0..d {
        out.push(c.clone());
        c = c * (a - BigRational::from_integer(n.into())) / BigRational::from_integer((n + 1).into());
    }
    out
}

pub fn series_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let d = a.len().min(b.len());
    (0..d)
        .map(|n| (0..=n).map(|i| &a[i] * &b[n - i]).sum())
        .collect()
}

pub fn series_inv(a: &[BigRational]) -> Vec<BigRational> {
    assert!(!a[0].is_zero());
    let mut out: Vec<BigRational> = Vec::with_capacity(a.len());
    for n in 0..a.len() {
        let mut s = if n == 0 { BigRational::one() } else { BigRational::zero() };
        for i in 1..=n {
            s -= &a[i] * &out[n - i];
        }
        out.push(s / &a[0]);
    }
    out
}

/// Dedekind sum `s(q,p) = Σ_{i=1}^{|p|−1} ((i/p))((qi/p))`, extended to
/// negative `p` as an odd function.
pub fn dedekind(q: i64, p: i64) -> BigRational {
    let saw = |x: BigRational| -> BigRational {
        if x.is_integer() {
            BigRational::zero()
        } else {
            &x - x.floor() - rat(1, 2)
        }
    };
    let pa = p.abs();
    let s: BigRational = (1..pa).map(|i| saw(rat(i, pa)) * saw(rat(q * i, pa))).sum();
    if p < 0 {
        -s
    } else {
        s
    }
}

/// λ-series of `L(p,q)` to degree `≤ n_max` from
/// `p·q̌^{3s(q,p)}·(q̌^{1/(2p)} − q̌^{−1/(2p)})/(q̌^{1/2} − q̌^{−1/2})` with
/// `q̌ = 1 + x`, expanded by generalised binomial series.
pub fn lens_lambda_oracle(p: i64, q: i64, n_max: usize) -> Vec<BigRational> {
    let d = n_max + 2;
    let diff = |a: BigRational| -> Vec<BigRational> {
        let plus = binomial_series(&a, d);
        let minus = binomial_series(&-a, d);
        // zero constant term: shift down by one
        plus.iter().zip(&minus).skip(1).map(|(u, v)| u - v).collect()
    };
    let num = diff(rat(1, 2 * p));
    let den = diff(rat(1, 2));
    let ratio = series_mul(&num, &series_inv(&den));
    let phase = binomial_series(&(dedekind(q, p) * BigRational::from_integer(3.into())), d - 1);
    let out = series_mul(&phase, &ratio);
    out.into_iter()
        .take(n_max + 1)
        .map(|c| c * BigRational::from_integer(p.into()))
        .collect()
}

/// `gcd(a, b) == 1`.
pub fn coprime(a: i64, b: i64) -> bool {
    a.gcd(&b) == 1
}

