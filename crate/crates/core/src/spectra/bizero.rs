use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::selection::{Condition, SelectionMap};
use crate::arith::Rational;
use crate::error::{precondition, Error, Result};
use crate::measure::{muhat_zero_member, MeasureSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Provenance {
    Canonical,
    SelectionMapImage,
    AdHoc,
}

/// A finite set of frequencies whose pairwise differences are zeros of `μ̂`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiZeroSet {
    pub spec: MeasureSpec,
    pub elements: Vec<Rational>,
    pub provenance: Provenance,
    /// Word length or digit depth used to build the set, if any.
    pub depth: Option<usize>,
}

impl BiZeroSet {
    pub fn ad_hoc(spec: MeasureSpec, mut elements: Vec<Rational>) -> Self {
        elements.sort();
        elements.dedup();
        BiZeroSet { spec, elements, provenance: Provenance::AdHoc, depth: None }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.elements.iter().map(Rational::to_f64).collect()
    }
}

/// `{Σ_{j<depth} a_j q^j : a_j ∈ (q/N){0, ..., N-1}}` for `μ_{1/q, N}`.
pub fn canonical_spectrum(q: u64, n: u32, depth: usize) -> Result<BiZeroSet> {
    if q < 2 || n < 2 {
        return precondition(format!("need q >= 2 and N >= 2, got q={q}, N={n}"));
    }
    if q % u64::from(n) != 0 {
        return precondition(format!("N={n} does not divide q={q}"));
    }
    if depth == 0 {
        return precondition("depth must be >= 1");
    }
    let size = (n as usize)
        .checked_pow(depth as u32)
        .filter(|&s| s <= 10_000_000)
        .ok_or_else(|| Error::OutOfRange(format!("{n}^{depth} elements is too many")))?;
    let step = BigInt::from(q / u64::from(n));
    let qb = BigInt::from(q);
    let mut elements = vec![BigInt::zero()];
    elements.reserve(size);
    let mut scale = BigInt::one();
    for _ in 0..depth {
        let level: Vec<BigInt> = elements
            .iter()
            .flat_map(|e| {
                let (step, scale) = (&step, &scale);
                (1..n).map(move |a| e + BigInt::from(a) * step * scale)
            })
            .collect();
        elements.extend(level);
        scale *= &qb;
    }
    let spec = MeasureSpec::rational(Rational::new(1, q)?, n)?;
    let mut elements: Vec<Rational> = elements.into_iter().map(Rational::from).collect();
    elements.sort();
    Ok(BiZeroSet { spec, elements, provenance: Provenance::Canonical, depth: Some(depth) })
}

/// `Λ = ρ^{-m0} N^{-1} ι*(Ω)` over words of length `<= maxlen`.
///
/// Maps that only break the digit range still give a bi-zero set and are
/// accepted; zero-word and congruence violations are rejected.
pub fn maximal_bizero_set(
    spec: &MeasureSpec,
    map: &SelectionMap,
    m0: u32,
    maxlen: usize,
) -> Result<BiZeroSet> {
    let rho = spec
        .rho_rational()
        .ok_or_else(|| Error::Precondition("ρ must be rational".into()))?;
    if !spec.is_consecutive() {
        return precondition("digit set must be {0, ..., N-1}");
    }
    let q = rho.denom().to_u64();
    if q != Some(map.q()) || spec.n() != map.n() {
        return precondition(format!(
            "map is for N={}, q={} but the measure has N={}, ρ={rho}",
            map.n(),
            map.q(),
            spec.n()
        ));
    }
    if m0 == 0 {
        return precondition("m0 must be >= 1");
    }
    if maxlen > map.depth() {
        return precondition(format!("maxlen {maxlen} exceeds map depth {}", map.depth()));
    }
    let report = map.validate();
    if let Some(v) = report
        .violations
        .iter()
        .find(|v| v.condition != Condition::DigitRange)
    {
        return Err(Error::InvalidMap(format!(
            "{:?} fails at word {:?} (digit {})",
            v.condition, v.word, v.digit
        )));
    }
    let scale = rho.pow(-(m0 as i32)) / Rational::from(i64::from(spec.n()));
    let mut elements = map
        .domain(maxlen)
        .iter()
        .map(|w| map.iota_star(w).map(|c| &scale * &Rational::from(c)))
        .collect::<Result<Vec<_>>>()?;
    elements.sort();
    elements.dedup();
    Ok(BiZeroSet {
        spec: spec.clone(),
        elements,
        provenance: Provenance::SelectionMapImage,
        depth: Some(maxlen),
    })
}

/// Pairs `(λ, λ')` whose difference is not a zero of `μ̂`.
pub fn bizero_failures(spec: &MeasureSpec, elements: &[Rational]) -> Result<Vec<(Rational, Rational)>> {
    spec.rho_rational()
        .ok_or_else(|| Error::Precondition("ρ must be rational".into()))?;
    let rows: Vec<Vec<(Rational, Rational)>> = (0..elements.len())
        .into_par_iter()
        .map(|i| {
            let mut bad = Vec::new();
            for j in i + 1..elements.len() {
                let diff = &elements[i] - &elements[j];
                if diff.is_zero() || !muhat_zero_member(spec, &diff)? {
                    bad.push((elements[i].clone(), elements[j].clone()));
                }
            }
            Ok(bad)
        })
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// Every difference of distinct listed elements lies in `Z(μ̂)`.
pub fn bizero_verify(spec: &MeasureSpec, elements: &[Rational]) -> Result<bool> {
    Ok(bizero_failures(spec, elements)?.is_empty())
}
