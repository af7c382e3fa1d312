// SPDX-License-Identifier: MIT OR Apache-2.0

//! Framing-independent coloured Jones data.
//!
//! Built-in links are the unknot, the `N`-component unlink, and the Seifert
//! star link (a centre coloured `β` linked once with `N` fibres).  Exact
//! values live in ℤ[q̌]: with `w = e^{iπ/K} = −q̌^{(K+1)/2}` the unknot value
//! `(w^α − w^{−α})/(w − w^{−1})` is the geometric sum `Σ_{j<α} q̌^{(α−1)/2−j}`
//! for odd `α > 0`.  External tables (exact coefficient vectors per odd
//! colour tuple at a fixed `K`) can be loaded from JSON.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::PrimeK;
use crate::cyclotomic::{CycInt, Precision};
use crate::error::{Error, Result};

/// A coloured Jones evaluator for a fixed link.
pub trait JonesTable: Send + Sync {
    /// Identifier used in manifold specs.
    fn id(&self) -> &str;
    /// Number of components.
    fn arity(&self) -> usize;
    /// Whether all pairwise linking numbers vanish.
    fn algebraically_split(&self) -> bool;
    /// Exact value at odd colours.
    fn exact(&self, colors: &[i64], k: PrimeK) -> Result<CycInt>;
    /// Numeric value at odd colours; `k` may be any odd integer ≥ 3.
    fn numeric(&self, colors: &[i64], k: i64) -> Result<Complex64>;
}

fn check_odd(colors: &[i64]) -> Result<()> {
    match colors.iter().find(|&&a| a % 2 == 0) {
        Some(&a) => Err(Error::EvenColor(a)),
        None => Ok(()),
    }
}

/// Exact unknot value `sin(πα/K)/sin(π/K)` in ℤ[q̌].
pub fn jones_unknot(alpha: i64, k: PrimeK) -> Result<CycInt> {
    if alpha % 2 == 0 {
        return Err(Error::EvenColor(alpha));
    }
    let n = alpha.abs();
    let kk = k.get() as usize;
    let mut counts = vec![0i64; kk];
    for j in 0..n {
        counts[k.reduce((n - 1) / 2 - j) as usize] += 1;
    }
    let v = CycInt::from_exponent_counts(k, &counts);
    Ok(if alpha < 0 { -v } else { v })
}

/// Numeric unknot value `sin(πα/k)/sin(π/k)`.
pub fn jones_unknot_numeric(alpha: i64, k: i64) -> f64 {
    sin_pi_frac(alpha, k) / sin_pi_frac(1, k)
}

/// `sin(π·a/k)` with the angle reduced exactly modulo `2k`.
pub fn sin_pi_frac(a: i64, k: i64) -> f64 {
    let r = a.rem_euclid(2 * k);
    (std::f64::consts::PI * r as f64 / k as f64).sin()
}

/// Numeric Seifert-link value
/// `(1/sin(π/K))·Π sin(πβα_j/K) / sin^{N−1}(πβ/K)`.
pub fn jones_seifert_numeric(beta: i64, alphas: &[i64], k: i64) -> Result<f64> {
    check_odd(&[beta])?;
    check_odd(alphas)?;
    let sb = sin_pi_frac(beta, k);
    let mut v = 1.0 / sin_pi_frac(1, k);
    for &a in alphas {
        v *= sin_pi_frac(beta * a, k);
    }
    Ok(v / sb.powi(alphas.len() as i32 - 1))
}

/// Exact Seifert-link value; the denominator `[β]^{N−1}` is a cyclotomic
/// unit when `K ∤ β`, so the quotient is taken by exact unit inversion.
pub fn jones_seifert(beta: i64, alphas: &[i64], k: PrimeK) -> Result<CycInt> {
    check_odd(&[beta])?;
    check_odd(alphas)?;
    let mut num = CycInt::one(k);
    for &a in alphas {
        num = &num * &jones_unknot(beta * a, k)?;
    }
    let n = alphas.len() as i64;
    let jb = jones_unknot(beta, k)?;
    if n >= 1 {
        let den = jb.pow((n - 1) as u32);
        Ok(&num * &den.invert_unit()?)
    } else {
        // zero fibres: the centre alone, J = [β]
        Ok(jb)
    }
}

/// The unknot.
#[derive(Clone, Copy, Debug, Default)]
pub struct Unknot;

impl JonesTable for Unknot {
    fn id(&self) -> &str {
        "unknot"
    }
    fn arity(&self) -> usize {
        1
    }
    fn algebraically_split(&self) -> bool {
        true
    }
    fn exact(&self, colors: &[i64], k: PrimeK) -> Result<CycInt> {
        arity_check(self, colors)?;
        jones_unknot(colors[0], k)
    }
    fn numeric(&self, colors: &[i64], k: i64) -> Result<Complex64> {
        arity_check(self, colors)?;
        check_odd(colors)?;
        Ok(Complex64::new(jones_unknot_numeric(colors[0], k), 0.0))
    }
}

/// The `N`-component unlink (product of unknot values).
#[derive(Clone, Debug)]
pub struct Unlink {
    n: usize,
    id: String,
}

impl Unlink {
    pub fn new(n: usize) -> Self {
        Unlink {
            n,
            id: "unlink".to_string(),
        }
    }
}

impl JonesTable for Unlink {
    fn id(&self) -> &str {
        &self.id
    }
    fn arity(&self) -> usize {
        self.n
    }
    fn algebraically_split(&self) -> bool {
        true
    }
    fn exact(&self, colors: &[i64], k: PrimeK) -> Result<CycInt> {
        arity_check(self, colors)?;
        colors
            .iter()
            .try_fold(CycInt::one(k), |acc, &a| Ok(&acc * &jones_unknot(a, k)?))
    }
    fn numeric(&self, colors: &[i64], k: i64) -> Result<Complex64> {
        arity_check(self, colors)?;
        check_odd(colors)?;
        Ok(Complex64::new(
            colors.iter().map(|&a| jones_unknot_numeric(a, k)).product(),
            0.0,
        ))
    }
}

/// The Seifert star link: colour order `(β, α_1, …, α_N)`.
#[derive(Clone, Debug)]
pub struct SeifertLink {
    fibres: usize,
    id: String,
}

impl SeifertLink {
    pub fn new(fibres: usize) -> Self {
        SeifertLink {
            fibres,
            id: "seifert".to_string(),
        }
    }
}

impl JonesTable for SeifertLink {
    fn id(&self) -> &str {
        &self.id
    }
    fn arity(&self) -> usize {
        self.fibres + 1
    }
    fn algebraically_split(&self) -> bool {
        self.fibres == 0
    }
    fn exact(&self, colors: &[i64], k: PrimeK) -> Result<CycInt> {
        arity_check(self, colors)?;
        jones_seifert(colors[0], &colors[1..], k)
    }
    fn numeric(&self, colors: &[i64], k: i64) -> Result<Complex64> {
        arity_check(self, colors)?;
        Ok(Complex64::new(
            jones_seifert_numeric(colors[0], &colors[1..], k)?,
            0.0,
        ))
    }
}

fn arity_check(t: &dyn JonesTable, colors: &[i64]) -> Result<()> {
    if colors.len() != t.arity() {
        return Err(Error::InvalidSpec(format!(
            "{} expects {} colours, got {}",
            t.id(),
            t.arity(),
            colors.len()
        )));
    }
    Ok(())
}

/// One row of an external table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExternalEntry {
    pub colors: Vec<i64>,
    pub coeffs: Vec<i64>,
}

/// JSON schema of an external table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExternalTableJson {
    pub id: String,
    pub arity: usize,
    #[serde(rename = "K")]
    pub k: i64,
    #[serde(default = "default_true")]
    pub algebraically_split: bool,
    pub values: Vec<ExternalEntry>,
}

fn default_true() -> bool {
    true
}

/// An externally supplied table at a single prime; colours are looked up
/// modulo `2K` (odd colours are `2K`-periodic).
#[derive(Clone, Debug)]
pub struct ExternalTable {
    id: String,
    arity: usize,
    k: PrimeK,
    asl: bool,
    values: HashMap<Vec<i64>, CycInt>,
}

impl ExternalTable {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ExternalTableJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        let k = PrimeK::new(raw.k)?;
        let mut values = HashMap::new();
        for e in raw.values {
            if e.colors.len() != raw.arity {
                return Err(Error::InvalidSpec(format!(
                    "entry {:?} has the wrong arity",
                    e.colors
                )));
            }
            check_odd(&e.colors)?;
            let key: Vec<i64> = e.colors.iter().map(|a| a.rem_euclid(2 * k.get())).collect();
            let v = CycInt::from_coeffs(k, e.coeffs.into_iter().map(BigInt::from).collect())?;
            values.insert(key, v);
        }
        Ok(ExternalTable {
            id: raw.id,
            arity: raw.arity,
            k,
            asl: raw.algebraically_split,
            values,
        })
    }
}

impl JonesTable for ExternalTable {
    fn id(&self) -> &str {
        &self.id
    }
    fn arity(&self) -> usize {
        self.arity
    }
    fn algebraically_split(&self) -> bool {
        self.asl
    }
    fn exact(&self, colors: &[i64], k: PrimeK) -> Result<CycInt> {
        arity_check(self, colors)?;
        check_odd(colors)?;
        if k != self.k {
            return Err(Error::MixedModulus(self.k.get(), k.get()));
        }
        let key: Vec<i64> = colors.iter().map(|a| a.rem_euclid(2 * k.get())).collect();
        self.values.get(&key).cloned().ok_or_else(|| {
            Error::UnknownJonesTable(format!("{}: no entry for colours {:?}", self.id, colors))
        })
    }
    fn numeric(&self, colors: &[i64], k: i64) -> Result<Complex64> {
        let pk = PrimeK::new(k)?;
        Ok(self.exact(colors, pk)?.eval_complex(Precision::Compensated))
    }
}

/// Resolves table identifiers: built-ins plus any registered external tables.
#[derive(Clone, Default)]
pub struct JonesRegistry {
    external: BTreeMap<String, Arc<dyn JonesTable>>,
}

impl std::fmt::Debug for JonesRegistry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("JonesRegistry")
            .field("external", &self.external.keys().collect::<Vec<_>>())
            .finish()
    }
}

impl JonesRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, table: Arc<dyn JonesTable>) {
        self.external.insert(table.id().to_string(), table);
    }

    /// Looks up `id` for a link with `arity` components.
    pub fn resolve(&self, id: &str, arity: usize) -> Result<Arc<dyn JonesTable>> {
        let t: Arc<dyn JonesTable> = match id {
            "unknot" => Arc::new(Unknot),
            "unlink" => Arc::new(Unlink::new(arity)),
            other => self
                .external
                .get(other)
                .cloned()
                .ok_or_else(|| Error::UnknownJonesTable(other.to_string()))?,
        };
        if t.arity() != arity {
            return Err(Error::InvalidSpec(format!(
                "table {id} has {} components but {arity} framings were given",
                t.arity()
            )));
        }
        Ok(t)
    }
}

/// Subjects with a closed trigonometric form for the structural check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExpansionSubject {
    /// The empty link, `J = 1`.
    Empty,
    /// `sin(πα/K)/sin(π/K)`.
    Unknot,
    /// Product of `N` unknot factors.
    Unlink(usize),
    /// The single-colour Seifert fibre function with orders `p_j`:
    /// `Π_j sin(πβ/(p_j K)) / (sin(π/K)·sin^{N−1}(πβ/K))`.
    SeifertFibre(Vec<i64>),
}

impl ExpansionSubject {
    pub fn name(&self) -> String {
        match self {
            ExpansionSubject::Empty => "empty".into(),
            ExpansionSubject::Unknot => "unknot".into(),
            ExpansionSubject::Unlink(n) => format!("unlink-{n}"),
            ExpansionSubject::SeifertFibre(p) => format!("seifert-fibre{p:?}"),
        }
    }
}

/// Outcome of [`expansion_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionReport {
    pub subject: String,
    pub n_max: usize,
    /// Number of nonzero monomials `D^{(m,n)}_{m_1…m_N} α^{2m}` inspected.
    pub monomials: usize,
    /// Largest `m` seen for each `n`.
    pub max_m: Vec<usize>,
}

/// Polynomial in the squared colours: exponent vector ↦ coefficient.
type Poly = BTreeMap<Vec<u32>, BigRational>;

/// A series in `h = iπ/K` with coefficients in ℚ[α_1², …, α_N²].
#[derive(Clone, Debug)]
struct MSeries {
    nvars: usize,
    terms: Vec<Poly>,
}

impl MSeries {
    fn constant(nvars: usize, n_max: usize, c: BigRational) -> Self {
        let mut terms = vec![Poly::new(); n_max + 1];
        terms[0].insert(vec![0; nvars], c);
        MSeries { nvars, terms }
    }

    /// `sinh(c·h·α_v)/(c·h·α_v)` (or with `α_v ≡ 1` when `var` is `None`).
    fn sinhc(nvars: usize, n_max: usize, var: Option<usize>, c: &BigRational) -> Self {
        let mut terms = vec![Poly::new(); n_max + 1];
        let mut fact = BigInt::one();
        let mut cp = BigRational::one();
        for k in 0..=n_max / 2 {
            if k > 0 {
                fact *= BigInt::from(2 * k) * BigInt::from(2 * k + 1);
                cp = &cp * c * c;
            }
            let mut e = vec![0u32; nvars];
            if let Some(v) = var {
                e[v] = k as u32;
            }
            terms[2 * k].insert(e, &cp / BigRational::from_integer(fact.clone()));
        }
        MSeries { nvars, terms }
    }

    fn mul(&self, o: &MSeries) -> MSeries {
        let n_max = self.terms.len() - 1;
        let mut terms = vec![Poly::new(); n_max + 1];
        for i in 0..=n_max {
            for j in 0..=n_max - i {
                for (ea, ca) in &self.terms[i] {
                    for (eb, cb) in &o.terms[j] {
                        let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                        *terms[i + j].entry(e).or_insert_with(BigRational::zero) += ca * cb;
                    }
                }
            }
        }
        for t in terms.iter_mut() {
            t.retain(|_, c| !c.is_zero());
        }
        MSeries {
            nvars: self.nvars,
            terms,
        }
    }

    /// Inverse of a series whose `h⁰` coefficient is the constant `1`.
    fn inverse(&self) -> Result<MSeries> {
        let n_max = self.terms.len() - 1;
        let one_key = vec![0u32; self.nvars];
        let c0 = &self.terms[0];
        if c0.len() != 1 || c0.get(&one_key).map(|c| c.is_one()) != Some(true) {
            return Err(Error::NonUnitDivisor);
        }
        let mut b: Vec<Poly> = vec![Poly::new(); n_max + 1];
        b[0].insert(one_key, BigRational::one());
        for n in 1..=n_max {
            let mut acc = Poly::new();
            for k in 1..=n {
                for (ea, ca) in &self.terms[k] {
                    for (eb, cb) in &b[n - k] {
                        let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                        *acc.entry(e).or_insert_with(BigRational::zero) -= ca * cb;
                    }
                }
            }
            acc.retain(|_, c| !c.is_zero());
            b[n] = acc;
        }
        Ok(MSeries {
            nvars: self.nvars,
            terms: b,
        })
    }
}

fn subject_series(subject: &ExpansionSubject, n_max: usize) -> Result<MSeries> {
    let one = BigRational::one();
    Ok(match subject {
        ExpansionSubject::Empty => MSeries::constant(0, n_max, one),
        ExpansionSubject::Unknot => {
            let den = MSeries::sinhc(1, n_max, None, &one).inverse()?;
            MSeries::sinhc(1, n_max, Some(0), &one).mul(&den)
        }
        ExpansionSubject::Unlink(n) => {
            let den = MSeries::sinhc(*n, n_max, None, &one).inverse()?;
            let mut acc = MSeries::constant(*n, n_max, one.clone());
            for v in 0..*n {
                acc = acc
                    .mul(&MSeries::sinhc(*n, n_max, Some(v), &one))
                    .mul(&den);
            }
            acc
        }
        ExpansionSubject::SeifertFibre(ps) => {
            if ps.iter().any(|&p| p == 0) {
                return Err(Error::InvalidSpec("fibre order 0".into()));
            }
            let p_prod: i64 = ps.iter().product();
            let mut acc = MSeries::constant(1, n_max, BigRational::new(one.numer().clone(), BigInt::from(p_prod)));
            for &p in ps {
                acc = acc.mul(&MSeries::sinhc(
                    1,
                    n_max,
                    Some(0),
                    &BigRational::new(BigInt::one(), BigInt::from(p)),
                ));
            }
            let den_h = MSeries::sinhc(1, n_max, None, &one).inverse()?;
            acc = acc.mul(&den_h);
            let den_b = MSeries::sinhc(1, n_max, Some(0), &one).inverse()?;
            for _ in 1..ps.len() {
                acc = acc.mul(&den_b);
            }
            acc
        }
    })
}

/// Expands `J/Π α_j` in powers of `h = iπ/K` and checks that every
/// monomial `α^{2m}` in the `hⁿ` coefficient has `4m ≤ 3n` and each partial
/// degree `m_j ≤ n − m`.
pub fn expansion_check(subject: &ExpansionSubject, n_max: usize) -> Result<ExpansionReport> {
    let s = subject_series(subject, n_max)?;
    let mut monomials = 0;
    let mut max_m = vec![0usize; n_max + 1];
    for (n, poly) in s.terms.iter().enumerate() {
        for e in poly.keys() {
            monomials += 1;
            let m: usize = e.iter().map(|&x| x as usize).sum();
            max_m[n] = max_m[n].max(m);
            if 4 * m > 3 * n {
                return Err(Error::BoundViolation {
                    n,
                    detail: format!("{}: degree 2m = {} exceeds 3n/2", subject.name(), 2 * m),
                });
            }
            if let Some(&mj) = e.iter().find(|&&mj| mj as usize + m > n) {
                return Err(Error::BoundViolation {
                    n,
                    detail: format!("{}: partial degree m_j = {mj} > n − m", subject.name()),
                });
            }
        }
    }
    Ok(ExpansionReport {
        subject: subject.name(),
        n_max,
        monomials,
        max_m,
    })
}

/// Numeric value of the expansion at `h = iπ/K` and colours `α` (for
/// cross-checking the symbolic series against trigonometry).
pub fn expansion_numeric(
    subject: &ExpansionSubject,
    n_max: usize,
    colors: &[f64],
    k: f64,
) -> Result<f64> {
    let s = subject_series(subject, n_max)?;
    // hⁿ with h = iπ/K contributes (i)^n; odd n never occur, even n give (−1)^{n/2}.
    let theta = std::f64::consts::PI / k;
    let mut total = 0.0;
    for (n, poly) in s.terms.iter().enumerate() {
        if poly.is_empty() {
            continue;
        }
        assert!(n % 2 == 0, "odd powers of h cannot occur");
        let sign = if (n / 2) % 2 == 0 { 1.0 } else { -1.0 };
        for (e, c) in poly {
            let mut v = crate::series::rat_to_f64(c) * sign * theta.powi(n as i32);
            for (j, &x) in e.iter().enumerate() {
                v *= colors[j].powi(2 * x as i32);
            }
            total += v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pk(k: i64) -> PrimeK {
        PrimeK::new(k).unwrap()
    }

    #[test]
    fn unknot_examples() {
        let k = pk(5);
        assert!(jones_unknot(1, k).unwrap().is_one());
        assert_eq!(jones_unknot(-1, k).unwrap(), CycInt::from_int(k, -1));
        let z = jones_unknot(3, k).unwrap().eval_complex(Precision::Double);
        assert!((z.re - 1.618_033_988_749_895).abs() < 1e-12 && z.im.abs() < 1e-12);
        assert_eq!(jones_unknot(2, k), Err(Error::EvenColor(2)));
    }

    #[test]
    fn seifert_collapses() {
        let k = pk(7);
        // N = 1 reduces to the unknot at colour βα
        assert_eq!(jones_seifert(3, &[5], k).unwrap(), jones_unknot(15, k).unwrap());
        // all α_j = 1 collapses to the unknot at β
        assert_eq!(
            jones_seifert(3, &[1, 1, 1], k).unwrap(),
            jones_unknot(3, k).unwrap()
        );
        // β = 1 is the product of unknots
        let want = (jones_unknot_numeric(3, 7) * jones_unknot_numeric(5, 7)) as f64;
        assert!((jones_seifert_numeric(1, &[3, 5], 7).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn expansion_examples() {
        let r = expansion_check(&ExpansionSubject::Unknot, 8).unwrap();
        assert!(r.monomials > 0);
        let s = expansion_check(&ExpansionSubject::SeifertFibre(vec![2, 3, 5]), 6).unwrap();
        assert!(s.monomials > 0);
        let e = expansion_check(&ExpansionSubject::Empty, 4).unwrap();
        assert_eq!(e.monomials, 1);
    }

    #[test]
    fn expansion_matches_trig() {
        let k = 101.0;
        let a = 3.0;
        let v = expansion_numeric(&ExpansionSubject::Unknot, 12, &[a], k).unwrap();
        let want = jones_unknot_numeric(3, 101) / 3.0;
        assert!((v - want).abs() < 1e-12);
    }

    #[test]
    fn registry_resolves_builtins() {
        let r = JonesRegistry::new();
        assert_eq!(r.resolve("unknot", 1).unwrap().arity(), 1);
        assert_eq!(r.resolve("unlink", 3).unwrap().arity(), 3);
        assert!(matches!(
            r.resolve("whitehead", 2),
            Err(Error::UnknownJonesTable(_))
        ));
        assert!(r.resolve("unknot", 2).is_err());
    }

    #[test]
    fn external_table_round_trip() {
        let k = pk(5);
        let mut values = Vec::new();
        for a in (1..10).step_by(2) {
            let v = jones_unknot(a, k).unwrap();
            values.push(ExternalEntry {
                colors: vec![a],
                coeffs: v.coeffs().iter().map(|c| i64::try_from(c).unwrap()).collect(),
            });
        }
        let json = serde_json::to_string(&ExternalTableJson {
            id: "my-unknot".into(),
            arity: 1,
            k: 5,
            algebraically_split: true,
            values,
        })
        .unwrap();
        let t = ExternalTable::from_json(&json).unwrap();
        for a in [-7, -3, 1, 3, 9, 11] {
            assert_eq!(t.exact(&[a], k).unwrap(), jones_unknot(a, k).unwrap());
        }
    }
}
