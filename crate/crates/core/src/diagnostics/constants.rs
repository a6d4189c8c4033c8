use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{dist_to_int_f64, AlgebraicNumber, Rational};
use crate::error::{precondition, Result};
use crate::measure::{mask_abs, muhat_partial_shifted, MeasureSpec, ShiftTable};
use crate::spectra::{maximal_bizero_set, SelectionMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaBound {
    pub alpha: String,
    #[serde(skip)]
    pub value: Rational,
    pub warning: Option<String>,
}

/// `α = 1 / (N Σ_{n=1}^{m} |c_n|)` for `c_0 x^m + c_1 x^{m-1} + ... + c_m`.
pub fn alpha_bound(coeffs: &[BigInt], n: u32) -> Result<AlphaBound> {
    if n < 2 {
        return precondition(format!("N must be >= 2, got {n}"));
    }
    let lead = coeffs.iter().position(|c| !c.is_zero());
    let Some(lead) = lead else {
        return precondition("zero polynomial");
    };
    let coeffs = &coeffs[lead..];
    if coeffs.len() < 3 {
        return precondition("degree must be >= 2; a degree-1 root is rational");
    }
    let warning = (!coeffs[0].is_one()).then(|| {
        format!("leading coefficient {} is not 1; the bound assumes a monic polynomial", coeffs[0])
    });
    let sum: BigInt = coeffs[1..].iter().map(Signed::abs).sum();
    if sum.is_zero() {
        return precondition("c_1..c_m are all zero");
    }
    let value = Rational::new(1, sum * n)?;
    Ok(AlphaBound { alpha: value.to_string(), value, warning })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaReport {
    pub alpha: f64,
    pub checked: usize,
    pub skipped: usize,
    /// Smallest value of `max_n ||ρ^{-n} a/N||` seen.
    pub min_observed: f64,
    /// `(a, max_n ||ρ^{-n} a/N||)` below `α - slack`.
    pub failures: Vec<(i64, f64)>,
}

impl AlphaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each `0 < |a| <= amax` with `N ∤ a`, checks `max_{1<=n<=m} ||ρ^{-n} a/N|| >= α - slack`.
pub fn alpha_property_check(rho: &AlgebraicNumber, n: u32, amax: i64, slack: f64) -> Result<AlphaReport> {
    let AlgebraicNumber::PolyRoot { coeffs, .. } = rho else {
        return precondition("ρ must be given as a polynomial root");
    };
    let alpha = alpha_bound(coeffs, n)?.value.to_f64();
    let m = coeffs.len() - 1;
    let inv = 1.0 / rho.approx();
    let mut report = AlphaReport { alpha, checked: 0, skipped: 0, min_observed: f64::INFINITY, failures: Vec::new() };
    for a in (-amax..=amax).filter(|&a| a != 0) {
        if a % i64::from(n) == 0 {
            report.skipped += 1;
            continue;
        }
        let base = a as f64 / f64::from(n);
        let best = (1..=m as i32)
            .map(|k| dist_to_int_f64(inv.powi(k) * base))
            .fold(0.0, f64::max);
        report.checked += 1;
        report.min_observed = report.min_observed.min(best);
        if best < alpha - slack {
            report.failures.push((a, best));
        }
    }
    Ok(report)
}

/// `max |M_N(ξ)|` over `[1/(2q), 1/2]`.
pub fn contraction_constant(n: u32, q: u64) -> Result<f64> {
    if n < 2 || q < 2 {
        return precondition(format!("need N >= 2 and q >= 2, got N={n}, q={q}"));
    }
    const GRID: usize = 2048;
    let (lo, hi) = (0.5 / q as f64, 0.5);
    let f = |x: f64| mask_abs(n, x);
    let step = (hi - lo) / (GRID - 1) as f64;
    let best = (0..GRID)
        .map(|i| lo + step * i as f64)
        .max_by(|a, b| f(*a).total_cmp(&f(*b)))
        .expect("grid is nonempty");
    let refined = golden_max(f, (best - step).max(lo), (best + step).min(hi), 1e-12);
    Ok(f(best).max(f(refined)))
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    while b - a > tol {
        if f(c) > f(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    (a + b) / 2.0
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselReport {
    pub xi: Vec<f64>,
    pub sums: Vec<f64>,
    pub words: usize,
    pub factors: usize,
}

impl BesselReport {
    pub fn max_sum(&self) -> f64 {
        self.sums.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.sums.iter().all(|&s| s <= 1.0 + 1e-9)
    }
}

/// `Σ_{|i|<=n} |μ̂_{n+m0-1}(ξ + ρ^{-m0} N^{-1} ι*(i))|²` on each grid point.
///
/// Words longer than the map depth are not available and are left out.
pub fn bessel_partial_check(
    spec: &MeasureSpec,
    map: &SelectionMap,
    m0: u32,
    n: usize,
    grid: &[f64],
) -> Result<BesselReport> {
    if n == 0 {
        return precondition("n must be >= 1");
    }
    let set = maximal_bizero_set(spec, map, m0, n.min(map.depth()))?;
    let factors = n + m0 as usize - 1;
    let tables: Vec<ShiftTable> = set.elements.iter().map(|l| ShiftTable::new(spec, l, factors)).collect();
    let sums = grid
        .iter()
        .map(|&x| {
            tables
                .iter()
                .map(|t| muhat_partial_shifted(spec, factors, x, t).norm_sqr())
                .sum()
        })
        .collect();
    Ok(BesselReport { xi: grid.to_vec(), sums, words: set.len(), factors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn poly(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_bound(&poly(&[1, 1, -1]), 2).unwrap().alpha, "1/4");
        assert_eq!(alpha_bound(&poly(&[1, 0, 2, -1]), 3).unwrap().alpha, "1/9");
        assert!(alpha_bound(&poly(&[1, -1]), 2).is_err());
        let warned = alpha_bound(&poly(&[2, 1, -1]), 2).unwrap();
        assert!(warned.warning.is_some());
        assert!(alpha_bound(&poly(&[1, 1, -1]), 2).unwrap().warning.is_none());
    }

    #[test]
    fn alpha_property_golden() {
        let rho: AlgebraicNumber = "poly:1,1,-1:0,1".parse().unwrap();
        for n in [2, 3] {
            let report = alpha_property_check(&rho, n, 999, 1e-9).unwrap();
            assert!(report.passed(), "N={n}: {:?}", &report.failures[..report.failures.len().min(3)]);
            assert!(report.skipped > 0);
        }
        assert!(alpha_property_check(&"1/3".parse().unwrap(), 2, 9, 1e-9).is_err());
    }

    #[test]
    fn contraction_closed_form() {
        for q in 2..=12u64 {
            let c = contraction_constant(2, q).unwrap();
            assert!((c - (PI / (2.0 * q as f64)).cos()).abs() <= 1e-9, "q={q}");
        }
        assert!((contraction_constant(2, 4).unwrap() - 0.923_879_5).abs() < 1e-7);
    }

    #[test]
    fn contraction_matches_dense_grid() {
        for (n, q) in [(3, 6), (4, 8), (3, 3), (5, 10)] {
            let c = contraction_constant(n, q).unwrap();
            let (lo, hi) = (0.5 / q as f64, 0.5);
            let brute = (0..=1_000_000)
                .map(|i| mask_abs(n, lo + (hi - lo) * f64::from(i) / 1e6))
                .fold(0.0, f64::max);
            assert!(c >= brute - 1e-12 && c - brute <= 1e-9, "N={n} q={q}");
            assert!(c < 1.0);
        }
    }

    #[test]
    fn bessel_examples() {
        let spec = MeasureSpec::rational("1/4".parse().unwrap(), 2).unwrap();
        let map = SelectionMap::canonical(2, 4, 4).unwrap();
        let report = bessel_partial_check(&spec, &map, 1, 3, &[0.2, 0.0]).unwrap();
        assert!(report.passed());
        assert!((report.sums[1] - 1.0).abs() <= 1e-12);
        let beyond = bessel_partial_check(&spec, &map, 1, 9, &[0.3]).unwrap();
        assert!(beyond.passed());
        assert_eq!(beyond.words, 16);
    }
}
