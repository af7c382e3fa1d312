// SPDX-License-Identifier: MIT OR Apache-2.0

//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Variants that "must not occur" on valid input (for instance
/// [`Error::DivisibilityFailure`]) signal that a mathematical identity the
/// computation relies on did not hold; they are surfaced rather than
/// papered over.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(i64),
    #[error("{0} has no inverse modulo {1}")]
    ZeroInverse(i64, i64),
    #[error("denominator divisible by K = {k}{}", degree.map(|d| format!(" at degree {d}")).unwrap_or_default())]
    DenominatorDivisibleByK { k: i64, degree: Option<usize> },
    #[error("operands use different moduli ({0} vs {1})")]
    MixedModulus(i64, i64),
    #[error("element is not a unit of Z[q]: inverse has non-integral coefficients")]
    NotAUnit,
    #[error("integrality assertion failed: {0}")]
    IntegralityFailure(String),
    #[error("series division by a series with non-unit constant term")]
    NonUnitDivisor,
    #[error("series exponential of a series with nonzero constant term")]
    NonzeroConstantInExp,
    #[error("factorial {0}! is not invertible modulo {1}")]
    FactorialNotInvertible(usize, i64),
    #[error("imaginary part did not cancel at degree {0}")]
    ImaginaryResidue(usize),
    #[error("lambda series is not normalised: lambda_0 = {0}")]
    BadNormalization(String),
    #[error("arguments {0} and {1} are not coprime")]
    NotCoprime(i64, i64),
    #[error("matrix has zero lower-left entry")]
    ZeroLowerLeft,
    #[error("Rademacher phi is not an integer: {0}")]
    NonIntegerPhi(String),
    #[error("manifold is not a rational homology sphere: {0}")]
    NotRhs(String),
    #[error("colour {0} is even")]
    EvenColor(i64),
    #[error("expansion bound violated at order {n}: {detail}")]
    BoundViolation { n: usize, detail: String },
    #[error("surgery chain has an intermediate q_t = {q_t} divisible by K = {k}")]
    ChainDegenerate { q_t: i64, k: i64 },
    #[error("x-adic divisibility failed: order {found} < required {required}")]
    DivisibilityFailure { found: usize, required: usize },
    #[error("assembled value is not integral: {0}")]
    NonIntegralAssembly(String),
    #[error("p = {p} is divisible by K = {k}")]
    PDivisibleByK { p: i64, k: i64 },
    #[error("phase does not reduce into Z[q]: zeta exponent {0}")]
    PhaseNotReducible(i64),
    #[error("diamond mismatch: {0}")]
    DiamondMismatch(String),
    #[error("Seifert data has H = 0 (not a rational homology sphere)")]
    HZero,
    #[error("|H_1| = {h1} is divisible by K = {k}")]
    H1DivisibleByK { h1: i64, k: i64 },
    #[error("need lambda_n up to n = {needed}, have {have}")]
    InsufficientTerms { needed: usize, have: usize },
    #[error("modulus insufficient to reconstruct lambda_{n} uniquely")]
    InsufficientModulus { n: usize },
    #[error("inconsistent residues for lambda_{n} at K = {k}")]
    InconsistentResidues { n: usize, k: i64 },
    #[error("invalid manifold specification: {0}")]
    InvalidSpec(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown Jones table: {0}")]
    UnknownJonesTable(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by a failed
    /// computation; the CLI maps these to exit code 2.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NotPrime(_)
                | Error::NotCoprime(..)
                | Error::NotRhs(_)
                | Error::EvenColor(_)
                | Error::HZero
                | Error::InvalidSpec(_)
                | Error::UnknownJonesTable(_)
                | Error::Unsupported(_)
        )
    }
}
