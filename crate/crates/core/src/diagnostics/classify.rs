use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::arith::AlgebraicNumber;
use crate::error::{precondition, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Spectral,
    NotSpectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    /// `ρ = 1/q` with `N | q`.
    RationalUnitNumerator,
    /// `ρ = u^{1/r}` with `u` rational and minimal `r > 1`.
    RationalRoot,
    /// Irrational and not a root of a rational.
    OtherIrrational,
    /// `ρ = p/q` with `gcd(N, q) < N`.
    GcdDefect,
    /// `ρ = p/q` with `p > 1` and `N | q`.
    NumeratorGreaterOne,
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CaseTag::RationalUnitNumerator => "RationalUnitNumerator",
            CaseTag::RationalRoot => "CaseI_RationalRoot",
            CaseTag::OtherIrrational => "CaseII_OtherIrrational",
            CaseTag::GcdDefect => "CaseIII_GcdDefect",
            CaseTag::NumeratorGreaterOne => "CaseIV_NumeratorGreaterOne",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectralVerdict {
    pub verdict: Verdict,
    pub case: CaseTag,
    pub explanation: String,
}

/// Spectrality of `μ_{ρ,N}`, decided symbolically from the form of `ρ`.
pub fn classify(rho: &AlgebraicNumber, n: u32) -> Result<SpectralVerdict> {
    if n < 2 {
        return precondition(format!("N must be >= 2, got {n}"));
    }
    let nb = BigInt::from(n);
    let (case, explanation) = match rho {
        AlgebraicNumber::RationalValue(r) => {
            let (p, q) = (r.numer(), r.denom());
            let g = nb.gcd(q);
            if g < nb {
                (CaseTag::GcdDefect, format!("ρ = {r}: gcd({n}, {q}) = {g} < {n}"))
            } else if p.is_one() {
                (CaseTag::RationalUnitNumerator, format!("ρ = 1/{q} and {n} divides {q}"))
            } else {
                (CaseTag::NumeratorGreaterOne, format!("ρ = {r}: numerator {p} > 1 and {n} divides {q}"))
            }
        }
        AlgebraicNumber::RationalRoot { radicand, index } => (
            CaseTag::RationalRoot,
            format!("ρ = ({radicand})^(1/{index}) is irrational with minimal index {index}"),
        ),
        AlgebraicNumber::PolyRoot { .. } => (
            CaseTag::OtherIrrational,
            format!("ρ = {rho} is irrational and not a root of a rational"),
        ),
    };
    let verdict = if case == CaseTag::RationalUnitNumerator {
        Verdict::Spectral
    } else {
        Verdict::NotSpectral
    };
    Ok(SpectralVerdict { verdict, case, explanation })
}
