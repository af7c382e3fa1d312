// SPDX-License-Identifier: MIT OR Apache-2.0

//! Surgery formulas.
//!
//! * [`z_numeric`] — the Reshetikhin–Turaev sum `Z(M;k)/Z(S³;k)` over colours
//!   `1..K−1`, evaluated on the plumbing tree of the presentation (chains of
//!   unknots for lens spaces, a star for Seifert spaces) or by brute force
//!   over colour tuples for `(p_j, 1)` surgery on a tabulated link.
//! * [`zprime_numeric`] — `Z′(M;k)` from the rational-surgery formula over odd
//!   colours in `(−K, K)`, with the closed-form chain matrix elements.
//! * [`exact_p1`] — `Z′` in ℤ[q̌] for `(p_j, 1)` surgery on an algebraically
//!   split link: the Gaussian colour sum is divided exactly by
//!   `x^{N(K−1)/2}` and multiplied by `u^N`.
//!
//! Conventions: `L(p, q)` is `−p/q` surgery on the unknot; a Seifert space
//! `X(p₁/q₁, …)` is `p_j/q_j` surgery on the fibres of a star link with a
//! 0-framed centre.  The rational-surgery prefactor carries
//! `e^{+iπκ·sign(L)/4}`, and the factor `q̌^{(2*−1/2)·sign(p_j/q_j)}` equals
//! `(−1)^{sign}`, with a 0-framed component contributing `−1`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{even_inv, legendre, PrimeK};
use crate::cyclotomic::{root_of_unity, unit_u, CompensatedSum, CycInt, Precision};
use crate::error::{Error, Result};
use crate::jones::{jones_unknot_numeric, sin_pi_frac, JonesRegistry, JonesTable};
use crate::nt::{cf_expand, rademacher_phi, signature, SeifertData};

/// A surgery description of a 3-manifold.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ManifoldSpec {
    /// The lens space `L(p, q)`.
    Lens { p: i64, q: i64 },
    /// The Seifert space `X(p₁/q₁, …, p_N/q_N)`; JSON `[[p, q], …]`.
    Seifert { fractions: Vec<(i64, i64)> },
    /// `(p_j, 1)` surgery on the link named by a Jones table.
    P1 { jones: String, framings: Vec<i64> },
}

impl ManifoldSpec {
    /// A stable human-readable key, used for sorting reports.
    pub fn id(&self) -> String {
        match self {
            ManifoldSpec::Lens { p, q } => format!("L({p},{q})"),
            ManifoldSpec::Seifert { fractions } => {
                let parts: Vec<String> = fractions.iter().map(|(p, q)| format!("{p}/{q}")).collect();
                format!("X({})", parts.join(","))
            }
            ManifoldSpec::P1 { jones, framings } => {
                let parts: Vec<String> = framings.iter().map(|p| p.to_string()).collect();
                format!("P1[{jones}]({})", parts.join(","))
            }
        }
    }

    /// The 3-sphere as `L(1, 0)`.
    pub fn sphere() -> Self {
        ManifoldSpec::Lens { p: 1, q: 0 }
    }

    /// Structural validation (coprimality, nonzero framings, `H ≠ 0`).
    pub fn validate(&self) -> Result<()> {
        match self {
            ManifoldSpec::Lens { p, q } => {
                if *p == 0 {
                    return Err(Error::NotRhs(self.id()));
                }
                if p.gcd(q) != 1 {
                    return Err(Error::NotCoprime(*p, *q));
                }
                Ok(())
            }
            ManifoldSpec::Seifert { fractions } => SeifertData::new(fractions.clone()).map(|_| ()),
            ManifoldSpec::P1 { framings, .. } => {
                if framings.iter().any(|&p| p == 0) {
                    return Err(Error::NotRhs(self.id()));
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ManifoldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// A phase `±ζ^E` with `ζ = e^{iπ/(4K)}`, `E` modulo `8K`.
///
/// Eighth roots of unity are `ζ^{K·a}`, `e^{iπb/K} = ζ^{4b}` and `q̌ = ζ⁸`.
/// A phase lies in ℤ[q̌] iff `4 | E`, and then `ζ^{4m} = (−1)^m q̌^{m(K+1)/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedPhase {
    k: PrimeK,
    exponent: i64,
}

impl ExtendedPhase {
    pub fn one(k: PrimeK) -> Self {
        ExtendedPhase { k, exponent: 0 }
    }

    /// `ζ^e`.
    pub fn zeta_pow(e: i64, k: PrimeK) -> Self {
        ExtendedPhase {
            k,
            exponent: e.rem_euclid(8 * k.get()),
        }
    }

    /// `e^{iπa/4}`.
    pub fn eighth(a: i64, k: PrimeK) -> Self {
        Self::zeta_pow(k.get() * a, k)
    }

    /// `e^{iπb/K}`.
    pub fn pi_over_k(b: i64, k: PrimeK) -> Self {
        Self::zeta_pow(4 * b, k)
    }

    /// `e^{iπ·num/(4K)}` for an arbitrary integer numerator.
    pub fn quarter_pi_over_k(num: i64, k: PrimeK) -> Self {
        Self::zeta_pow(num, k)
    }

    /// `q̌^j`.
    pub fn qcheck(j: i64, k: PrimeK) -> Self {
        Self::zeta_pow(8 * k.reduce(j), k)
    }

    /// `−1`.
    pub fn minus_one(k: PrimeK) -> Self {
        Self::zeta_pow(4 * k.get(), k)
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.k != o.k {
            return Err(Error::MixedModulus(self.k.get(), o.k.get()));
        }
        Ok(Self::zeta_pow(self.exponent + o.exponent, self.k))
    }

    pub fn pow(&self, n: i64) -> Self {
        Self::zeta_pow(self.exponent * n, self.k)
    }

    /// Reduces to an element of ℤ[q̌].
    pub fn reduce(&self) -> Result<CycInt> {
        if self.exponent % 4 != 0 {
            return Err(Error::PhaseNotReducible(self.exponent));
        }
        let m = self.exponent / 4;
        let z = CycInt::qpow(m * ((self.k.get() + 1) / 2), self.k);
        Ok(if m % 2 == 0 { z } else { -z })
    }

    /// Numeric value.
    pub fn eval(&self) -> Complex64 {
        root_of_unity(self.exponent, 8 * self.k.get())
    }
}

impl fmt::Display for ExtendedPhase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ζ^{} (ζ = e^(iπ/{}))", self.exponent, 4 * self.k.get())
    }
}

fn sum_complex(values: impl IntoIterator<Item = Complex64>, precision: Precision) -> Complex64 {
    match precision {
        Precision::Double => values.into_iter().sum(),
        Precision::Compensated => {
            let mut acc = CompensatedSum::new();
            for v in values {
                acc.add(v);
            }
            acc.value()
        }
    }
}

/// A framed plumbing tree: integer framings and edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlumbingGraph {
    pub framings: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
}

impl PlumbingGraph {
    /// The chain for `p/q` surgery on the unknot (`q ≥ 1` after sign
    /// normalisation), listed from `m_t̄` down to `m_1`.
    pub fn chain(p: i64, q: i64) -> Result<Self> {
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        let mut framings = cf_expand(p, q)?.m;
        framings.reverse();
        let edges = (1..framings.len()).map(|i| (i - 1, i)).collect();
        Ok(PlumbingGraph { framings, edges })
    }

    /// The graph of `L(p, q)`.
    pub fn lens(p: i64, q: i64) -> Result<Self> {
        Self::chain(-p, q)
    }

    /// The star graph of a Seifert space: vertex 0 is the 0-framed centre.
    pub fn seifert(s: &SeifertData) -> Result<Self> {
        let mut g = PlumbingGraph {
            framings: vec![0],
            edges: vec![],
        };
        for &(p, q) in &s.fractions {
            let c = Self::chain(p, q)?;
            let base = g.framings.len();
            g.edges.push((0, base));
            g.edges.extend(c.edges.iter().map(|(a, b)| (a + base, b + base)));
            g.framings.extend(c.framings);
        }
        Ok(g)
    }

    pub fn linking_matrix(&self) -> Vec<Vec<num_rational::BigRational>> {
        use num_rational::BigRational;
        let n = self.framings.len();
        let mut m = vec![vec![BigRational::zero(); n]; n];
        for (i, &f) in self.framings.iter().enumerate() {
            m[i][i] = BigRational::from_integer(BigInt::from(f));
        }
        for &(a, b) in &self.edges {
            m[a][b] = BigRational::from_integer(BigInt::from(1));
            m[b][a] = BigRational::from_integer(BigInt::from(1));
        }
        m
    }

    /// `Z/Z(S³)` by a message-passing sum over colours `1..k−1`.
    pub fn rt_value(&self, k: i64, precision: Precision) -> Complex64 {
        let n = self.framings.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let sig = signature(&self.linking_matrix());
        let s1 = sin_pi_frac(1, k);
        let colours: Vec<i64> = (1..k).collect();
        let weight = |v: usize, a: i64| -> Complex64 {
            let f = self.framings[v];
            root_of_unity(f * (a * a - 1), 4 * k)
                * sin_pi_frac(a, k)
                * (s1 / sin_pi_frac(a, k)).powi(adj[v].len() as i32 - 1)
        };
        fn message(
            v: usize,
            parent: Option<usize>,
            adj: &[Vec<usize>],
            colours: &[i64],
            k: i64,
            s1: f64,
            weight: &dyn Fn(usize, i64) -> Complex64,
            precision: Precision,
        ) -> Vec<Complex64> {
            let mut vals: Vec<Complex64> = colours.iter().map(|&a| weight(v, a)).collect();
            for &c in &adj[v] {
                if Some(c) == parent {
                    continue;
                }
                let mc = message(c, Some(v), adj, colours, k, s1, weight, precision);
                for (ia, &a) in colours.iter().enumerate() {
                    let s = sum_complex(
                        colours
                            .iter()
                            .zip(&mc)
                            .map(|(&b, m)| m * (sin_pi_frac(a * b, k) / s1)),
                        precision,
                    );
                    vals[ia] *= s;
                }
            }
            vals
        }
        let mut seen = vec![false; n];
        let mut res = Complex64::new(1.0, 0.0);
        for v in 0..n {
            if seen[v] {
                continue;
            }
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                if !seen[u] {
                    seen[u] = true;
                    stack.extend(adj[u].iter().copied());
                }
            }
            let m = message(v, None, &adj, &colours, k, s1, &weight, precision);
            res *= sum_complex(m, precision);
        }
        let kf = k as f64;
        // e^{−(3πi/4)(1−2/K)σ} = e^{−iπ·3(K−2)σ/(4K)}
        (2.0 / kf).powf(n as f64 / 2.0) * root_of_unity(-3 * (k - 2) * sig, 8 * k) * res
    }
}

/// `Z(M;k)/Z(S³;k)` by direct summation (`k` any odd integer ≥ 3).
pub fn z_numeric(m: &ManifoldSpec, k: i64, precision: Precision) -> Result<Complex64> {
    z_numeric_with(m, k, precision, &JonesRegistry::new())
}

/// [`z_numeric`] with an explicit table registry.
pub fn z_numeric_with(
    m: &ManifoldSpec,
    k: i64,
    precision: Precision,
    registry: &JonesRegistry,
) -> Result<Complex64> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::InvalidSpec(format!("K = {k} must be odd and ≥ 3")));
    }
    m.validate()?;
    match m {
        ManifoldSpec::Lens { p, q } => {
            if *q == 0 {
                // L(±1, 0) = S³
                return Ok(Complex64::new(1.0, 0.0));
            }
            Ok(PlumbingGraph::lens(*p, *q)?.rt_value(k, precision))
        }
        ManifoldSpec::Seifert { fractions } => {
            let s = SeifertData::new(fractions.clone())?;
            Ok(PlumbingGraph::seifert(&s)?.rt_value(k, precision))
        }
        ManifoldSpec::P1 { jones, framings } => {
            let table = registry.resolve(jones, framings.len())?;
            p1_rt(table.as_ref(), framings, k, precision)
        }
    }
}

fn colour_tuples(n: usize, colours: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                colours.iter().map(move |&a| {
                    let mut u = t.clone();
                    u.push(a);
                    u
                })
            })
            .collect();
    }
    out
}

fn p1_rt(table: &dyn JonesTable, framings: &[i64], k: i64, precision: Precision) -> Result<Complex64> {
    if !table.algebraically_split() {
        return Err(Error::Unsupported(format!(
            "{} is not algebraically split",
            table.id()
        )));
    }
    let n = framings.len();
    let sig: i64 = framings.iter().map(|p| p.signum()).sum();
    let colours: Vec<i64> = (1..k).collect();
    let tuples = colour_tuples(n, &colours);
    let terms: Vec<Result<Complex64>> = tuples
        .par_iter()
        .map(|al| {
            let mut w = table.numeric(al, k)?;
            for (&p, &a) in framings.iter().zip(al) {
                w *= root_of_unity(p * (a * a - 1), 4 * k) * sin_pi_frac(a, k);
            }
            Ok(w)
        })
        .collect();
    let terms: Vec<Complex64> = terms.into_iter().collect::<Result<_>>()?;
    let kf = k as f64;
    Ok((2.0 / kf).powf(n as f64 / 2.0)
        * root_of_unity(-3 * (k - 2) * sig, 8 * k)
        * sum_complex(terms, precision))
}

/// One component of a rational surgery presentation, normalised to `q ≥ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalComponent {
    pub p: i64,
    pub q: i64,
    /// Lower-right entry of the chain matrix `U^{(p,q)}`.
    pub s: i64,
    /// `Φ(U^{(p,q)})`.
    pub phi: i64,
}

impl RationalComponent {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
        let u = cf_expand(p, q)?.matrix();
        Ok(RationalComponent {
            p,
            q,
            s: u.s,
            phi: rademacher_phi(&u)?,
        })
    }

    /// `q̌^{4* q*(pα² + s)} · (i/2)(q̌^{−2* q* α} − q̌^{2* q* α})`; the second
    /// factor equals `sin(2π·2*q*α/K)`.
    fn weight(&self, alpha: i64, k: PrimeK, q_star: i64) -> Complex64 {
        let kk = k.get();
        let e = k.reduce(k.inv4() * q_star % kk * k.reduce(self.p * k.reduce(alpha * alpha) + self.s));
        let a = k.reduce(k.inv2() * q_star % kk * k.reduce(alpha));
        root_of_unity(e, kk) * sin_pi_frac(2 * a, kk)
    }
}

/// The prefactor of the rational-surgery formula for the given components
/// and link signature.
fn rational_prefactor(comps: &[RationalComponent], sig_l: i64, k: PrimeK) -> Complex64 {
    let kk = k.get();
    let n = comps.len() as i32;
    let mut c = 1.0;
    for comp in comps {
        // (−1)^{sign(p/q)} = −1 whichever the sign
        c *= -(legendre(comp.q, k) as f64);
    }
    let sum_phi: i64 = comps.iter().map(|c| c.phi).sum();
    let phase = ExtendedPhase::eighth(k.kappa() * sig_l, k)
        .mul(&ExtendedPhase::quarter_pi_over_k(-3 * (kk - 2) * sig_l, k))
        .and_then(|ph| ph.mul(&ExtendedPhase::qcheck(-k.inv4() * k.reduce(sum_phi), k)))
        .expect("same K");
    phase.eval() * c * (kk as f64).powf(-(n as f64) / 2.0)
}

/// Numeric `Z′` for a rational presentation with a numeric Jones evaluator.
/// Every component must have `q ≢ 0 (mod K)`.
pub fn zprime_rational(
    comps: &[RationalComponent],
    sig_l: i64,
    k: PrimeK,
    jones: &(dyn Fn(&[i64]) -> Result<Complex64> + Sync),
    precision: Precision,
) -> Result<Complex64> {
    let kk = k.get();
    let q_stars: Vec<i64> = comps
        .iter()
        .map(|c| {
            k.inv(c.q).map_err(|_| Error::ChainDegenerate { q_t: c.q, k: kk })
        })
        .collect::<Result<_>>()?;
    let odd: Vec<i64> = (-kk + 2..kk).step_by(2).collect();
    let tuples = colour_tuples(comps.len(), &odd);
    let terms: Vec<Result<Complex64>> = tuples
        .par_iter()
        .map(|al| {
            let mut t = jones(al)?;
            for ((c, &qs), &a) in comps.iter().zip(&q_stars).zip(al) {
                t *= c.weight(a, k, qs);
            }
            Ok(t)
        })
        .collect();
    let terms: Vec<Complex64> = terms.into_iter().collect::<Result<_>>()?;
    Ok(rational_prefactor(comps, sig_l, k) * sum_complex(terms, precision))
}

/// `Z′` of a Seifert space by the rational-surgery formula, with the colour
/// sum factorised over the star: `Σ_β w_0(β)[β]^{1−N} Π_j Σ_α [βα] w_j(α)`.
fn zprime_seifert_numeric(s: &SeifertData, k: PrimeK, precision: Precision) -> Result<Complex64> {
    let kk = k.get();
    let mut comps = vec![RationalComponent::new(0, 1)?];
    for &(p, q) in &s.fractions {
        comps.push(RationalComponent::new(p, q)?);
    }
    let q_stars: Vec<i64> = comps
        .iter()
        .map(|c| k.inv(c.q).map_err(|_| Error::ChainDegenerate { q_t: c.q, k: kk }))
        .collect::<Result<_>>()?;
    let sig_l = signature(&s.linking_matrix());
    let nf = s.fractions.len() as i32;
    let odd: Vec<i64> = (-kk + 2..kk).step_by(2).collect();
    let per_beta: Vec<Complex64> = odd
        .par_iter()
        .map(|&b| {
            let mut v = comps[0].weight(b, k, q_stars[0])
                * jones_unknot_numeric(b, kk).powi(1 - nf)
                / sin_pi_frac(1, kk).powi(nf);
            for (j, c) in comps.iter().enumerate().skip(1) {
                let inner = sum_complex(
                    odd.iter()
                        .map(|&a| c.weight(a, k, q_stars[j]) * sin_pi_frac(b * a, kk)),
                    precision,
                );
                v *= inner;
            }
            v
        })
        .collect();
    Ok(rational_prefactor(&comps, sig_l, k) * sum_complex(per_beta, precision))
}

/// The presentation actually used for a lens space: `L(p, q + t|p|)` with
/// the smallest `t ≥ 0` such that `K ∤ q + t|p|`.
pub fn lens_presentation(p: i64, q: i64, k: PrimeK) -> Result<i64> {
    let ap = p.abs();
    for t in 0..k.get() {
        let qq = q + t * ap;
        if k.reduce(qq) != 0 {
            return Ok(qq);
        }
    }
    Err(Error::ChainDegenerate { q_t: q, k: k.get() })
}

/// `Z′` of a lens space from the rational-surgery formula on the given
/// presentation (no retries).
pub fn zprime_lens_presentation(p: i64, q: i64, k: PrimeK, precision: Precision) -> Result<Complex64> {
    let comp = RationalComponent::new(-p, q)?;
    let sig = comp.p.signum();
    let kk = k.get();
    zprime_rational(
        &[comp],
        sig,
        k,
        &|al: &[i64]| Ok(Complex64::new(jones_unknot_numeric(al[0], kk), 0.0)),
        precision,
    )
}

/// Numeric `Z′(M;k)` from the rational-surgery formula.
pub fn zprime_numeric(m: &ManifoldSpec, k: PrimeK, precision: Precision) -> Result<Complex64> {
    zprime_numeric_with(m, k, precision, &JonesRegistry::new())
}

/// [`zprime_numeric`] with an explicit table registry.
pub fn zprime_numeric_with(
    m: &ManifoldSpec,
    k: PrimeK,
    precision: Precision,
    registry: &JonesRegistry,
) -> Result<Complex64> {
    m.validate()?;
    match m {
        ManifoldSpec::Lens { p, q } => {
            if *q == 0 {
                return Ok(Complex64::new(1.0, 0.0));
            }
            let qq = lens_presentation(*p, *q, k)?;
            zprime_lens_presentation(*p, qq, k, precision)
        }
        ManifoldSpec::Seifert { fractions } => {
            zprime_seifert_numeric(&SeifertData::new(fractions.clone())?, k, precision)
        }
        ManifoldSpec::P1 { jones, framings } => {
            let table = registry.resolve(jones, framings.len())?;
            if !table.algebraically_split() {
                return Err(Error::Unsupported(format!(
                    "{} is not algebraically split",
                    table.id()
                )));
            }
            let comps: Vec<RationalComponent> = framings
                .iter()
                .map(|&p| RationalComponent::new(p, 1))
                .collect::<Result<_>>()?;
            let sig: i64 = framings.iter().map(|p| p.signum()).sum();
            let kk = k.get();
            zprime_rational(&comps, sig, k, &|al: &[i64]| table.numeric(al, kk), precision)
        }
    }
}

/// Outcome of the Kirby–Melvin factorisation check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KirbyMelvinCheck {
    /// `Z(M;k)/Z(S³;k)`.
    pub z: Complex64,
    /// `Z′(M;k)`.
    pub zprime: Complex64,
    /// `Z(M;1)/Z(S³;1)` (conjugated when `K ≡ 1 mod 4`).
    pub factor: Complex64,
    pub residual: f64,
    pub ok: bool,
}

/// Checks `Z(M;k)/Z(S³;k) = Z′(M;k)·Z(M;1)^{(∗)}` numerically.
pub fn kirby_melvin_check(m: &ManifoldSpec, k: PrimeK, tol: f64) -> Result<KirbyMelvinCheck> {
    let prec = Precision::Compensated;
    let z = z_numeric(m, k.get(), prec)?;
    let z1 = z_numeric(m, 3, prec)?;
    let factor = if k.kappa() == 1 { z1 } else { z1.conj() };
    let zprime = zprime_numeric(m, k, prec)?;
    let residual = (z - zprime * factor).norm();
    let ok = residual <= tol * z.norm().max(1.0);
    Ok(KirbyMelvinCheck {
        z,
        zprime,
        factor,
        residual,
        ok,
    })
}

/// Exact `Z′` for `(p_j, 1)` surgery on an algebraically split link.
pub fn exact_p1(m: &ManifoldSpec, k: PrimeK, registry: &JonesRegistry) -> Result<CycInt> {
    let ManifoldSpec::P1 { jones, framings } = m else {
        return Err(Error::InvalidSpec(format!("{m} is not a (p,1) surgery")));
    };
    m.validate()?;
    let n = framings.len();
    if n == 0 {
        return Ok(CycInt::one(k));
    }
    let table = registry.resolve(jones, n)?;
    if !table.algebraically_split() {
        return Err(Error::Unsupported(format!(
            "{} is not algebraically split",
            table.id()
        )));
    }
    let p_prod = framings.iter().fold(1i64, |acc, &p| k.reduce(acc * k.reduce(p)));
    if p_prod == 0 {
        // The link is algebraically split, so |H₁| = Π|p_j|.
        let h1 = crate::nt::h1_order(m)? as i64;
        return Err(Error::H1DivisibleByK { h1, k: k.get() });
    }
    let kk = k.get();
    let h = k.half();
    let four = k.inv4();
    let p_star: Vec<i64> = framings
        .iter()
        .map(|&p| even_inv(k.residue(p)))
        .collect::<Result<_>>()?;

    // S = Σ_{odd α} q̌^{4*Σ p_j α_j²} J_{α + p*}.  The shift by p* is only a
    // bijection on a full set of odd residues mod 2K, so α = K is included
    // (its unshifted term vanishes because J_K = 0).
    let odd: Vec<i64> = (-kk + 2..=kk).step_by(2).collect();
    let tuples = colour_tuples(n, &odd);
    let parts: Vec<Result<CycInt>> = tuples
        .par_chunks(64)
        .map(|chunk| {
            let mut acc = CycInt::zero(k);
            for al in chunk {
                let mut e = 0i64;
                let mut shifted = Vec::with_capacity(n);
                for ((&p, &ps), &a) in framings.iter().zip(&p_star).zip(al) {
                    e = k.reduce(e + k.reduce(p) * k.reduce(a * a));
                    shifted.push(a + ps);
                }
                let j = table.exact(&shifted, k)?;
                acc = &acc + &j.mul_qpow(four * e % kk);
            }
            Ok(acc)
        })
        .collect();
    let mut s = CycInt::zero(k);
    for part in parts {
        s = &s + &part?;
    }

    let required = n * h;
    let found = s.x_order();
    let reduced = s.div_x_pow(required).map_err(|_| Error::DivisibilityFailure {
        found,
        required,
    })?;

    // Phase e^{iπ(κ−1)/4·Σ(sign p_j − 1)}: each summand is 0 or 2·(κ−1)/… ∈ ℤ
    let kappa = k.kappa();
    let mut eighths = 0i64;
    let mut qexp = 0i64;
    for (&p, &ps) in framings.iter().zip(&p_star) {
        eighths += (kappa - 1) * (p.signum() - 1);
        qexp = k.reduce(qexp + 3 * p.signum() - k.reduce(p) - k.reduce(ps));
    }
    let phase = ExtendedPhase::eighth(eighths, k)
        .mul(&ExtendedPhase::qcheck(four * qexp, k))?
        .reduce()
        .map_err(|e| Error::NonIntegralAssembly(e.to_string()))?;
    let u = unit_u(k)?;
    let un = u.pow(n as u32);
    Ok(&(&phase * &un) * &reduced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(k: i64) -> PrimeK {
        PrimeK::new(k).unwrap()
    }

    #[test]
    fn extended_phase_reduction() {
        let k = pk(7);
        assert!(ExtendedPhase::one(k).reduce().unwrap().is_one());
        assert_eq!(ExtendedPhase::qcheck(3, k).reduce().unwrap(), CycInt::qpow(3, k));
        assert_eq!(
            ExtendedPhase::minus_one(k).reduce().unwrap(),
            CycInt::from_int(k, -1)
        );
        assert!(matches!(
            ExtendedPhase::eighth(1, k).reduce(),
            Err(Error::PhaseNotReducible(_))
        ));
        let z = ExtendedPhase::pi_over_k(1, k);
        let zr = z.reduce().unwrap().eval_complex(Precision::Double);
        assert!((zr - z.eval()).norm() < 1e-12);
    }

    #[test]
    fn sphere_is_one() {
        let s3 = ManifoldSpec::sphere();
        for k in [5, 7, 11] {
            let z = zprime_numeric(&s3, pk(k), Precision::Double).unwrap();
            assert!((z - 1.0).norm() < 1e-12);
            let z = z_numeric(&s3, k, Precision::Double).unwrap();
            assert!((z - 1.0).norm() < 1e-12);
        }
        let empty = ManifoldSpec::P1 {
            jones: "unlink".into(),
            framings: vec![],
        };
        assert!(exact_p1(&empty, pk(5), &JonesRegistry::new()).unwrap().is_one());
    }

    #[test]
    fn unit_framed_unknot_is_sphere() {
        for k in [5, 7, 11] {
            for p in [1, -1] {
                let l = ManifoldSpec::Lens { p, q: 1 };
                let z = zprime_numeric(&l, pk(k), Precision::Double).unwrap();
                assert!((z - 1.0).norm() < 1e-9, "L({p},1) at K = {k}: {z}");
                let z = z_numeric(&l, k, Precision::Double).unwrap();
                assert!((z - 1.0).norm() < 1e-9, "RT L({p},1) at K = {k}: {z}");
            }
            let m = ManifoldSpec::P1 {
                jones: "unknot".into(),
                framings: vec![1],
            };
            assert!(exact_p1(&m, pk(k), &JonesRegistry::new()).unwrap().is_one());
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let specs = [
            r#"{"type":"lens","p":3,"q":1}"#,
            r#"{"type":"seifert","fractions":[[2,1],[3,1],[5,-4]]}"#,
            r#"{"type":"p1","jones":"unknot","framings":[2]}"#,
        ];
        for s in specs {
            let m: ManifoldSpec = serde_json::from_str(s).unwrap();
            let back = serde_json::to_string(&m).unwrap();
            assert_eq!(serde_json::from_str::<ManifoldSpec>(&back).unwrap(), m);
        }
    }

    #[test]
    fn lens_presentation_skips_multiples_of_k() {
        assert_eq!(lens_presentation(3, 5, pk(5)).unwrap(), 8);
        assert_eq!(lens_presentation(3, 2, pk(5)).unwrap(), 2);
    }
}
