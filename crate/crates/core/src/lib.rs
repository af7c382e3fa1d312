// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exact SO(3) quantum invariants of rational homology spheres at odd prime
//! level, Ohtsuki's λ-series of the trivial-connection contribution, and a
//! machine check of the identity
//!
//! ```text
//! [ |H₁| · (|H₁| / K) · Z′(M;k) ]^◇  =  [ Σ λₙ(M) xⁿ ]^∨
//! ```
//!
//! The crate is organised bottom-up:
//!
//! | module        | contents |
//! |---------------|----------|
//! | [`arith`]     | residues mod K, Legendre symbol, κ, the `∨` map on rationals |
//! | [`cyclotomic`]| exact ℤ[q̌] arithmetic, the `x = q̌ − 1` basis, x-adic order, `◇`, Gauss sums |
//! | [`series`]    | truncated rational power series, ℤ′_K[x], `∨` on series, λ ↔ S conversion |
//! | [`nt`]        | Dedekind sums, Rademacher Φ, SL(2,ℤ) chains, signatures, `|H₁|` |
//! | [`jones`]     | built-in coloured Jones data and expansion-structure checks |
//! | [`surgery`]   | numeric surgery oracles and the exact `(p,1)`-surgery path |
//! | [`closedform`]| lens and Seifert closed forms and λ-series |
//! | [`ohtsuki`]   | the identity check and CRT reconstruction of λₙ |
//! | [`cli`]       | command-line front end used by the `quantum-rhs` binary |
//!
//! All exact paths use unbounded integers and rationals; floating point only
//! appears in the numeric oracles and in [`cyclotomic::CycInt::eval_complex`].

pub mod arith;
pub mod cli;
pub mod closedform;
pub mod cyclotomic;
pub mod error;
pub mod jones;
pub mod nt;
pub mod ohtsuki;
pub mod series;
pub mod surgery;

pub use arith::{PrimeK, Residue};
pub use cyclotomic::{CycInt, XPoly};
pub use error::{Error, Result};
pub use series::{RatSeries, TruncPoly};
pub use surgery::ManifoldSpec;
