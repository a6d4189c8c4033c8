//! The N-Bernoulli measure `μ_{ρ,N}` and its Fourier transform: mask
//! polynomials, exact zero sets for rational `ρ`, and truncated infinite
//! products carrying a certified tail bound.

mod mask;

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

pub use mask::{
    digit_mask_eval, g_eval, mask_abs, mask_eval, mask_factorization_residual, mask_zero_member,
};

use crate::arith::{valuation, AlgebraicNumber, Rational};
use crate::error::{precondition, Error, Result};

/// Hard ceiling on product length; reached only for ρ extremely close to 1.
const MAX_FACTORS: usize = 1_000_000;

/// `μ_{ρ,D}` with uniform weights on the digit set `D ∋ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpec {
    rho: AlgebraicNumber,
    rho_approx: f64,
    digits: Vec<i64>,
    consecutive: bool,
}

impl MeasureSpec {
    /// The measure with consecutive digits `{0, ..., N-1}`.
    pub fn new(rho: AlgebraicNumber, n: u32) -> Result<Self> {
        if n < 2 {
            return precondition(format!("N must be >= 2, got {n}"));
        }
        Ok(MeasureSpec {
            rho_approx: rho.approx(),
            rho,
            digits: (0..i64::from(n)).collect(),
            consecutive: true,
        })
    }

    pub fn with_digits(rho: AlgebraicNumber, mut digits: Vec<i64>) -> Result<Self> {
        digits.sort_unstable();
        digits.dedup();
        if !digits.contains(&0) {
            return precondition("digit set must contain 0");
        }
        if digits.len() < 2 {
            return precondition("digit set needs at least two elements");
        }
        let consecutive = digits.iter().zip(0..).all(|(&d, i)| d == i);
        Ok(MeasureSpec { rho_approx: rho.approx(), rho, digits, consecutive })
    }

    pub fn rational(rho: Rational, n: u32) -> Result<Self> {
        MeasureSpec::new(AlgebraicNumber::rational(rho)?, n)
    }

    pub fn rho(&self) -> &AlgebraicNumber {
        &self.rho
    }

    pub fn rho_f64(&self) -> f64 {
        self.rho_approx
    }

    pub fn rho_rational(&self) -> Option<&Rational> {
        self.rho.as_rational()
    }

    /// Number of digits.
    pub fn n(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn is_consecutive(&self) -> bool {
        self.consecutive
    }

    pub fn mask(&self, xi: f64) -> Complex64 {
        if self.consecutive {
            mask_eval(self.n(), xi)
        } else {
            digit_mask_eval(&self.digits, xi)
        }
    }

    /// Constant `C` in `|1 - M(η)| <= C |η|`; equals `π(N-1)` for consecutive digits.
    pub fn tail_constant(&self) -> f64 {
        let mean_abs: f64 =
            self.digits.iter().map(|&d| d.unsigned_abs() as f64).sum::<f64>() / self.digits.len() as f64;
        2.0 * PI * mean_abs
    }

    /// `(p, q)` for rational `ρ = p/q` with consecutive digits, as required by
    /// the exact zero-set tests.
    fn exact_ratio(&self) -> Result<(BigInt, BigInt)> {
        if !self.consecutive {
            return precondition("exact zero sets need consecutive digits");
        }
        match self.rho_rational() {
            Some(r) => Ok((r.numer().clone(), r.denom().clone())),
            None => precondition(format!("exact zero sets need rational rho, got {}", self.rho)),
        }
    }
}

/// Absolute error target for a truncated product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationBudget {
    eps: f64,
}

impl TruncationBudget {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && eps > 0.0) {
            return Err(Error::OutOfRange(format!("tolerance must be positive, got {eps}")));
        }
        Ok(TruncationBudget { eps })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Smallest `K >= 1` with `C |ξ| ρ^{K+1} / (1-ρ) <= ε`, and that tail bound.
    pub fn cutoff(&self, spec: &MeasureSpec, abs_xi: f64) -> (usize, f64) {
        let rho = spec.rho_f64();
        let scale = spec.tail_constant() * abs_xi / (1.0 - rho);
        let mut k = 1usize;
        let mut tail = scale * rho * rho;
        if tail > self.eps && scale.is_finite() {
            let guess = ((self.eps / scale).ln() / rho.ln()).floor() as usize;
            k = guess.saturating_sub(2).clamp(1, MAX_FACTORS);
            tail = scale * rho.powi(k as i32 + 1);
        }
        while tail > self.eps && k < MAX_FACTORS {
            k += 1;
            tail *= rho;
        }
        (k, tail)
    }
}

/// A truncated product together with its certified error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub value: Complex64,
    pub error_bound: f64,
    pub factors: usize,
}

/// `Π_{k=1}^{K} M(ρ^k ξ)` with `K` chosen so the neglected tail is within budget.
pub fn muhat_truncated(spec: &MeasureSpec, xi: f64, budget: &TruncationBudget) -> Truncated {
    if xi == 0.0 {
        return Truncated { value: Complex64::new(1.0, 0.0), error_bound: 0.0, factors: 0 };
    }
    let (k_max, tail) = budget.cutoff(spec, xi.abs());
    let rho = spec.rho_f64();
    let mut scaled = xi;
    let mut value = Complex64::new(1.0, 0.0);
    for _ in 0..k_max {
        scaled *= rho;
        value *= spec.mask(scaled);
    }
    Truncated { value, error_bound: tail, factors: k_max }
}

/// `μ̂_n(ξ) = Π_{i=1}^{n} M(ρ^i ξ)`.
pub fn muhat_partial(spec: &MeasureSpec, n: usize, xi: f64) -> Result<Complex64> {
    if n == 0 {
        return precondition("partial product needs n >= 1");
    }
    let rho = spec.rho_f64();
    let mut scaled = xi;
    let mut value = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        scaled *= rho;
        value *= spec.mask(scaled);
    }
    Ok(value)
}

/// Phases `ρ^k λ mod 1` for a fixed shift `λ`, exact when `ρ` is rational.
///
/// Evaluating `M(ρ^k(ξ + λ))` as `M(phase_k + ρ^k ξ)` keeps full double
/// precision even when `|λ|` is large.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTable {
    shift: Rational,
    shift_f64: f64,
    phases: Vec<f64>,
}

impl ShiftTable {
    pub fn new(spec: &MeasureSpec, shift: &Rational, factors: usize) -> Self {
        let shift_f64 = shift.to_f64();
        let phases = match spec.rho_rational() {
            Some(rho) => exact_phases(rho, shift, factors),
            None => {
                let rho = spec.rho_f64();
                let mut x = shift_f64;
                (0..factors)
                    .map(|_| {
                        x *= rho;
                        x - x.round()
                    })
                    .collect()
            }
        };
        ShiftTable { shift: shift.clone(), shift_f64, phases }
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn shift_f64(&self) -> f64 {
        self.shift_f64
    }

    fn phase(&self, k: usize, rho: f64) -> f64 {
        // beyond the table ρ^k λ is small enough for direct evaluation
        self.phases
            .get(k - 1)
            .copied()
            .unwrap_or_else(|| self.shift_f64 * rho.powi(k as i32))
    }
}

fn exact_phases(rho: &Rational, shift: &Rational, factors: usize) -> Vec<f64> {
    let (p, q) = (rho.numer(), rho.denom());
    let mut num = shift.numer().clone();
    let mut den = shift.denom().clone();
    let mut out = Vec::with_capacity(factors);
    for _ in 0..factors {
        num *= p;
        den *= q;
        let rem = num.mod_floor(&den);
        out.push(Rational::new(rem, den.clone()).expect("nonzero").to_f64());
    }
    out
}

/// `μ̂(ξ + λ)` truncated within budget, with `λ` supplied as a [`ShiftTable`].
pub fn muhat_shifted(
    spec: &MeasureSpec,
    xi: f64,
    table: &ShiftTable,
    budget: &TruncationBudget,
) -> Truncated {
    let total = xi + table.shift_f64();
    if xi == 0.0 && table.shift().is_zero() {
        return Truncated { value: Complex64::new(1.0, 0.0), error_bound: 0.0, factors: 0 };
    }
    let (k_max, tail) = budget.cutoff(spec, total.abs());
    Truncated { value: shifted_product(spec, xi, table, k_max), error_bound: tail, factors: k_max }
}

/// `μ̂_n(ξ + λ)` with the exact phases of `λ`.
pub fn muhat_partial_shifted(spec: &MeasureSpec, n: usize, xi: f64, table: &ShiftTable) -> Complex64 {
    shifted_product(spec, xi, table, n)
}

fn shifted_product(spec: &MeasureSpec, xi: f64, table: &ShiftTable, factors: usize) -> Complex64 {
    let rho = spec.rho_f64();
    let mut scaled = xi;
    let mut value = Complex64::new(1.0, 0.0);
    for k in 1..=factors {
        scaled *= rho;
        value *= spec.mask(table.phase(k, rho) + scaled);
        if value == Complex64::new(0.0, 0.0) {
            break;
        }
    }
    value
}

/// Exact test for `ξ ∈ Z(μ̂) = {ρ^{-k} a/N : k >= 1, a ∈ Z \ NZ}` with `ρ = p/q`.
///
/// Writing `ξ = s/t`, only `k` with `q^k | sN` can make `ξ N ρ^k` integral.
pub fn muhat_zero_member(spec: &MeasureSpec, xi: &Rational) -> Result<bool> {
    let (p, q) = spec.exact_ratio()?;
    if xi.is_zero() {
        return Ok(false);
    }
    let nb = BigInt::from(spec.n());
    let sn = xi.numer() * &nb;
    let q_small = q
        .to_u64()
        .ok_or_else(|| Error::Precondition(format!("denominator {q} too large")))?;
    let k_max = valuation(&sn, q_small)?;
    let (mut pk, mut qk) = (BigInt::one(), BigInt::one());
    for _ in 1..=k_max {
        pk *= &p;
        qk *= &q;
        let num = &sn * &pk;
        let den = xi.denom() * &qk;
        if num.is_multiple_of(&den) && !(num / den).is_multiple_of(&nb) {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn spec(rho: &str, n: u32) -> MeasureSpec {
        MeasureSpec::rational(r(rho), n).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert!(MeasureSpec::rational(r("1/4"), 1).is_err());
        assert!(MeasureSpec::with_digits(AlgebraicNumber::rational(r("1/6")).unwrap(), vec![1, 2]).is_err());
        let general =
            MeasureSpec::with_digits(AlgebraicNumber::rational(r("1/6")).unwrap(), vec![2, 0]).unwrap();
        assert_eq!(general.digits(), &[0, 2]);
        assert!(!general.is_consecutive());
        let consecutive =
            MeasureSpec::with_digits(AlgebraicNumber::rational(r("1/6")).unwrap(), vec![2, 0, 1]).unwrap();
        assert!(consecutive.is_consecutive());
        assert!((spec("1/4", 3).tail_constant() - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn budget_cutoff_is_minimal() {
        let s = spec("1/4", 2);
        let b = TruncationBudget::new(1e-10).unwrap();
        for xi in [0.1, 1.0, 37.5, 1e7] {
            let (k, tail) = b.cutoff(&s, xi);
            assert!(tail <= 1e-10);
            let c = s.tail_constant() * xi / (1.0 - 0.25);
            assert!(k == 1 || c * 0.25f64.powi(k as i32) > 1e-10, "xi={xi} k={k}");
        }
        assert!(TruncationBudget::new(0.0).is_err());
        assert!(TruncationBudget::new(f64::NAN).is_err());
    }

    #[test]
    fn zero_member_examples() {
        assert!(muhat_zero_member(&spec("1/4", 2), &r("2")).unwrap());
        assert!(!muhat_zero_member(&spec("1/4", 2), &r("1")).unwrap());
        assert!(muhat_zero_member(&spec("3/4", 2), &r("8/3")).unwrap());
        assert!(!muhat_zero_member(&spec("3/4", 2), &r("0")).unwrap());
        let irrational = MeasureSpec::new("root:2:1/2".parse().unwrap(), 2).unwrap();
        assert!(muhat_zero_member(&irrational, &r("2")).is_err());
    }

    /// Forward enumeration of `ρ^{-k} a/N` over a finite box of `(k, a)`.
    fn zero_set_oracle(rho: &Rational, n: i64) -> std::collections::HashSet<Rational> {
        let inv = rho.recip().unwrap();
        let mut out = std::collections::HashSet::new();
        for k in 1..8 {
            let scale = inv.pow(k);
            for a in (-400..=400i64).filter(|a| a % n != 0) {
                out.insert(&scale * &Rational::new(a, n).unwrap());
            }
        }
        out
    }

    #[test]
    fn zero_member_matches_enumeration() {
        for (rho, n) in [("1/4", 2u32), ("3/4", 2), ("1/6", 3), ("2/3", 3), ("1/3", 2)] {
            let s = spec(rho, n);
            let zeros = zero_set_oracle(&r(rho), i64::from(n));
            for num in -60i64..=60 {
                for den in [1i64, 2, 3, 4, 9] {
                    let xi = Rational::new(num, den).unwrap();
                    assert_eq!(
                        muhat_zero_member(&s, &xi).unwrap(),
                        zeros.contains(&xi),
                        "rho={rho} xi={xi}"
                    );
                }
            }
        }
    }

    #[test]
    fn truncated_examples() {
        let b = TruncationBudget::new(1e-12).unwrap();
        let t = muhat_truncated(&spec("3/4", 2), 0.0, &b);
        assert_eq!((t.value, t.error_bound), (Complex64::new(1.0, 0.0), 0.0));

        let t = muhat_truncated(&spec("1/4", 2), 2.0, &b);
        assert!(t.value.norm() <= b.eps());

        // independent oracle: Π cos(π 2^{-k-1}) via 60 real factors
        let oracle: f64 = (1..=60).map(|k| (PI * 0.5f64.powi(k + 1)).cos()).product();
        let t = muhat_truncated(&spec("1/2", 2), 0.5, &b);
        assert!((t.value.norm() - oracle).abs() <= b.eps() + 1e-15);
    }

    #[test]
    fn partial_examples() {
        let s = spec("1/4", 2);
        assert!(muhat_partial(&s, 0, 1.0).is_err());
        assert_eq!(muhat_partial(&s, 3, 0.0).unwrap(), Complex64::new(1.0, 0.0));
        assert!(muhat_partial(&s, 1, 2.0).unwrap().norm() < 1e-15);
        let direct = mask_eval(2, 0.25) * mask_eval(2, 1.0 / 16.0);
        assert!((muhat_partial(&s, 2, 1.0).unwrap() - direct).norm() < 1e-15);
    }

    #[test]
    fn exact_phases_reduce_mod_one() {
        let s = spec("3/4", 2);
        let table = ShiftTable::new(&s, &r("1000001/3"), 5);
        let mut x = r("1000001/3");
        for k in 1..=5 {
            x = x * r("3/4");
            let want = x.frac_floor().to_f64();
            assert!((table.phase(k, 0.75) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn shifted_agrees_with_direct_for_small_shifts() {
        let b = TruncationBudget::new(1e-12).unwrap();
        for (rho, n) in [("1/4", 2u32), ("3/4", 2), ("1/6", 3)] {
            let s = spec(rho, n);
            for shift in ["0", "2", "-8/3", "10"] {
                let lam = r(shift);
                let table = ShiftTable::new(&s, &lam, 200);
                for xi in [0.0, 0.13, 0.77] {
                    let a = muhat_shifted(&s, xi, &table, &b);
                    let d = muhat_truncated(&s, xi + lam.to_f64(), &b);
                    assert!((a.value - d.value).norm() < 1e-11, "rho={rho} shift={shift} xi={xi}");
                }
            }
        }
    }

    #[test]
    fn general_digits_product() {
        // μ_{1/6,{0,2}}: the mask is (1 + e^{-4πiξ})/2
        let s =
            MeasureSpec::with_digits(AlgebraicNumber::rational(r("1/6")).unwrap(), vec![0, 2]).unwrap();
        let b = TruncationBudget::new(1e-12).unwrap();
        let xi = 0.9;
        let oracle: f64 = (1..=40).map(|k| (2.0 * PI * xi / 6f64.powi(k)).cos().abs()).product();
        assert!((muhat_truncated(&s, xi, &b).value.norm() - oracle).abs() < 1e-11);
        assert!(muhat_zero_member(&s, &r("3")).is_err());
    }

    #[test]
    fn irrational_rho_product() {
        let s = MeasureSpec::new("poly:1,1,-1:0,1".parse().unwrap(), 2).unwrap();
        let rho = (5f64.sqrt() - 1.0) / 2.0;
        let b = TruncationBudget::new(1e-12).unwrap();
        let oracle: f64 = (1..=200).map(|k| (PI * rho.powi(k) * 3.3).cos()).product();
        assert!((muhat_truncated(&s, 3.3, &b).value.norm() - oracle.abs()).abs() < 1e-11);
    }

    proptest! {
        #[test]
        fn zero_members_have_small_transform(a in -200i64..200, k in 1i32..5) {
            let s = spec("1/4", 2);
            prop_assume!(a % 2 != 0);
            let xi = Rational::from_integer(4).pow(k) * Rational::new(a, 2).unwrap();
            prop_assert!(muhat_zero_member(&s, &xi).unwrap());
            let b = TruncationBudget::new(1e-10).unwrap();
            let table = ShiftTable::new(&s, &xi, 64);
            prop_assert!(muhat_shifted(&s, 0.0, &table, &b).value.norm() <= b.eps());
        }

        #[test]
        fn scaling_recursion(xi in -30.0f64..30.0, which in 0usize..3) {
            let (rho, n) = [("1/4", 2u32), ("3/4", 2), ("2/5", 3)][which];
            let s = spec(rho, n);
            let b = TruncationBudget::new(1e-11).unwrap();
            let full = muhat_truncated(&s, xi, &b);
            let inner = muhat_truncated(&s, s.rho_f64() * xi, &b);
            let rhs = s.mask(s.rho_f64() * xi) * inner.value;
            prop_assert!((full.value - rhs).norm() <= full.error_bound + inner.error_bound + 1e-12);
        }

        #[test]
        fn products_are_bounded(xi in -1e4f64..1e4, n in 1usize..30) {
            let s = spec("3/4", 3);
            prop_assert!(muhat_partial(&s, n, xi).unwrap().norm() <= 1.0 + 1e-12);
        }
    }
}
