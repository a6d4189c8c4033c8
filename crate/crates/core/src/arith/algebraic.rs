use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;
use crate::error::{precondition, Error, Result};

/// Bisection stops once the isolating interval is narrower than `2^-80`.
const BISECTION_BITS: u32 = 80;

/// Largest coefficient magnitude accepted by the rational-root search.
const MAX_DIVISOR_SEARCH: u64 = 1_000_000_000_000;

/// A real number in `(0, 1)` that is rational, an `r`-th root of a rational,
/// or the unique root of an integer polynomial inside an isolating interval.
///
/// Constructors normalize: roots are reduced to their minimal index, and
/// polynomial roots that turn out to be rational or pure powers are retagged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraicNumber {
    RationalValue(Rational),
    RationalRoot {
        radicand: Rational,
        index: u32,
    },
    PolyRoot {
        /// Leading coefficient first: `c0 x^m + c1 x^(m-1) + ... + cm`.
        coeffs: Vec<BigInt>,
        lo: Rational,
        hi: Rational,
    },
}

fn check_unit_interval(x: &Rational, what: &str) -> Result<()> {
    if x.is_positive() && *x < Rational::one() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{what} {x} is not in (0,1)")))
    }
}

impl AlgebraicNumber {
    pub fn rational(value: Rational) -> Result<Self> {
        check_unit_interval(&value, "rho")?;
        Ok(AlgebraicNumber::RationalValue(value))
    }

    /// `radicand^(1/index)`, reduced to the smallest admissible index.
    pub fn rational_root(radicand: Rational, index: u32) -> Result<Self> {
        if index == 0 {
            return precondition("root index must be positive");
        }
        check_unit_interval(&radicand, "radicand")?;
        let (radicand, index) = minimize_root(radicand, index);
        if index == 1 {
            Ok(AlgebraicNumber::RationalValue(radicand))
        } else {
            Ok(AlgebraicNumber::RationalRoot { radicand, index })
        }
    }

    /// The single root of `coeffs` (leading first) in `(lo, hi) ⊂ (0, 1)`.
    pub fn poly_root(coeffs: Vec<BigInt>, lo: Rational, hi: Rational) -> Result<Self> {
        let mut coeffs = trim_leading_zeros(coeffs);
        if coeffs.len() < 2 {
            return precondition("polynomial must be nonconstant");
        }
        if lo.numer().is_negative() {
            return Err(Error::OutOfRange(format!("interval start {lo} is negative")));
        }
        if hi > Rational::one() || lo >= hi {
            return Err(Error::OutOfRange(format!("interval ({lo}, {hi}) is not inside (0,1)")));
        }
        let roots_inside = sturm_root_count(&coeffs, &lo, &hi)?;
        if roots_inside != 1 {
            return precondition(format!(
                "interval ({lo}, {hi}) holds {roots_inside} distinct roots, expected exactly 1"
            ));
        }

        for root in rational_roots(&coeffs)? {
            if root > lo && root < hi {
                return AlgebraicNumber::rational(root);
            }
            while eval_int_poly(&coeffs, &root).is_zero() {
                coeffs = deflate(&coeffs, &root);
            }
        }
        if let Some((u, r)) = pure_power_detect(&coeffs) {
            return AlgebraicNumber::rational_root(u, r);
        }
        let g = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if coeffs[0].is_negative() { -BigInt::one() } else { BigInt::one() };
        let coeffs = coeffs.into_iter().map(|c| c / &g * &sign).collect();
        Ok(AlgebraicNumber::PolyRoot { coeffs, lo, hi })
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            AlgebraicNumber::RationalValue(r) => Some(r),
            _ => None,
        }
    }

    /// Floating-point value; polynomial roots are refined by exact bisection.
    pub fn approx(&self) -> f64 {
        match self {
            AlgebraicNumber::RationalValue(r) => r.to_f64(),
            AlgebraicNumber::RationalRoot { radicand, index } => {
                radicand.to_f64().powf(1.0 / f64::from(*index))
            }
            AlgebraicNumber::PolyRoot { coeffs, lo, hi } => bisect(coeffs, lo, hi).to_f64(),
        }
    }
}

fn trim_leading_zeros(mut coeffs: Vec<BigInt>) -> Vec<BigInt> {
    let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
    coeffs.drain(..lead);
    coeffs
}

fn is_perfect_power(x: &BigInt, s: u32) -> Option<BigInt> {
    if x.is_negative() {
        return None;
    }
    let root = x.nth_root(s);
    (num_traits::pow(root.clone(), s as usize) == *x).then_some(root)
}

fn minimize_root(mut u: Rational, mut r: u32) -> (Rational, u32) {
    let mut p = 2;
    while p <= r {
        if r % p == 0 {
            let reduced = is_perfect_power(u.numer(), p)
                .zip(is_perfect_power(u.denom(), p))
                .map(|(a, b)| Rational::new(a, b).expect("positive denominator"));
            if let Some(v) = reduced {
                u = v;
                r /= p;
                continue;
            }
        }
        p += 1;
    }
    (u, r)
}

/// Detects `c0 x^m + cm` with `x^m = -cm/c0 = u ∈ (0,1)` and returns the
/// reduced pair `(u', r)`; `r = 1` means the root is the rational `u'`.
pub fn pure_power_detect(coeffs: &[BigInt]) -> Option<(Rational, u32)> {
    let mut coeffs = trim_leading_zeros(coeffs.to_vec());
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    if coeffs.len() < 2 || coeffs[1..coeffs.len() - 1].iter().any(|c| !c.is_zero()) {
        return None;
    }
    let m = (coeffs.len() - 1) as u32;
    let u = Rational::new(-coeffs[m as usize].clone(), coeffs[0].clone()).ok()?;
    if !u.is_positive() || u >= Rational::one() {
        return None;
    }
    Some(minimize_root(u, m))
}

fn eval_int_poly(coeffs: &[BigInt], x: &Rational) -> Rational {
    coeffs
        .iter()
        .fold(Rational::zero(), |acc, c| acc * x + Rational::from_integer(c.clone()))
}

/// Synthetic division by `(x - root)`; the quotient is scaled back to
/// integer coefficients.
fn deflate(coeffs: &[BigInt], root: &Rational) -> Vec<BigInt> {
    let mut quotient = Vec::with_capacity(coeffs.len() - 1);
    let mut acc = Rational::zero();
    for c in &coeffs[..coeffs.len() - 1] {
        acc = acc * root + Rational::from_integer(c.clone());
        quotient.push(acc.clone());
    }
    let lcm = quotient
        .iter()
        .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    quotient
        .into_iter()
        .map(|q| (q * Rational::from_integer(lcm.clone())).numer().clone())
        .collect()
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n
        .abs()
        .to_u64()
        .filter(|&v| v <= MAX_DIVISOR_SEARCH)
        .ok_or_else(|| Error::Precondition(format!("coefficient {n} too large for rational-root search")))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Ok(out)
}

/// All distinct rational roots, found by the rational-root theorem.
fn rational_roots(coeffs: &[BigInt]) -> Result<Vec<Rational>> {
    let mut coeffs = coeffs.to_vec();
    let mut roots = Vec::new();
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    if coeffs.len() < 2 {
        return Ok(roots);
    }
    let numers = divisors(coeffs.last().expect("nonempty"))?;
    let denoms = divisors(&coeffs[0])?;
    for a in &numers {
        for b in &denoms {
            for sign in [1, -1] {
                let cand = Rational::new(a * sign, b.clone())?;
                if !roots.contains(&cand) && eval_int_poly(&coeffs, &cand).is_zero() {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

type RatPoly = Vec<BigRational>;

/// Ascending-order coefficients.
fn to_ascending(coeffs: &[BigInt]) -> RatPoly {
    coeffs
        .iter()
        .rev()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect()
}

fn trim(mut p: RatPoly) -> RatPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_rem(a: &RatPoly, b: &RatPoly) -> RatPoly {
    let mut rem = a.clone();
    let lead = b.last().expect("nonzero divisor").clone();
    while rem.len() >= b.len() && !(rem.len() == 1 && rem[0].is_zero()) {
        let shift = rem.len() - b.len();
        let factor = rem.last().expect("nonempty") / &lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        rem.pop();
        if rem.is_empty() {
            rem.push(BigRational::zero());
        }
        rem = trim(rem);
    }
    rem
}

fn eval_rat_poly(p: &RatPoly, x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn sign_changes(seq: &[RatPoly], x: &BigRational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| eval_rat_poly(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(lo, hi]` by Sturm's theorem.
fn sturm_root_count(coeffs: &[BigInt], lo: &Rational, hi: &Rational) -> Result<usize> {
    let p = to_ascending(coeffs);
    if eval_rat_poly(&p, lo.as_big()).is_zero() || eval_rat_poly(&p, hi.as_big()).is_zero() {
        return precondition("isolating interval endpoint is a root");
    }
    let dp: RatPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    let mut seq = vec![p, trim(dp)];
    loop {
        let n = seq.len();
        let r = poly_rem(&seq[n - 2], &seq[n - 1]);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
        if seq.last().is_some_and(|p| p.len() == 1) {
            break;
        }
    }
    Ok(sign_changes(&seq, lo.as_big()) - sign_changes(&seq, hi.as_big()))
}

fn bisect(coeffs: &[BigInt], lo: &Rational, hi: &Rational) -> Rational {
    let (mut lo, mut hi) = (lo.clone(), hi.clone());
    let lo_sign = eval_int_poly(coeffs, &lo).is_positive();
    let width = Rational::new(1, BigInt::one() << BISECTION_BITS).expect("nonzero");
    let two = Rational::from_integer(2);
    while &hi - &lo > width {
        let mid = (&lo + &hi) / &two;
        let v = eval_int_poly(coeffs, &mid);
        if v.is_zero() {
            return mid;
        }
        if v.is_positive() == lo_sign {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (&lo + &hi) / &two
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicNumber::RationalValue(r) => write!(f, "{r}"),
            AlgebraicNumber::RationalRoot { radicand, index } => {
                write!(f, "root:{index}:{radicand}")
            }
            AlgebraicNumber::PolyRoot { coeffs, lo, hi } => {
                let cs: Vec<String> = coeffs.iter().map(ToString::to_string).collect();
                write!(f, "poly:{}:{lo},{hi}", cs.join(","))
            }
        }
    }
}

/// Accepts `p/q`, `root:r:p/q` and `poly:c0,...,cm:lo,hi`.
impl FromStr for AlgebraicNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::Parse(format!("{s:?}: {why}"));
        if let Some(rest) = s.strip_prefix("root:") {
            let (r, u) = rest.split_once(':').ok_or_else(|| bad("expected root:r:p/q"))?;
            let r: u32 = r.trim().parse().map_err(|_| bad("root index is not an integer"))?;
            return AlgebraicNumber::rational_root(u.parse()?, r);
        }
        if let Some(rest) = s.strip_prefix("poly:") {
            let (cs, iv) = rest.split_once(':').ok_or_else(|| bad("expected poly:c0,...,cm:lo,hi"))?;
            let coeffs = cs
                .split(',')
                .map(|c| c.trim().parse::<BigInt>().map_err(|_| bad("bad coefficient")))
                .collect::<Result<Vec<_>>>()?;
            let (lo, hi) = iv.split_once(',').ok_or_else(|| bad("expected lo,hi"))?;
            return AlgebraicNumber::poly_root(coeffs, lo.parse()?, hi.parse()?);
        }
        AlgebraicNumber::rational(s.parse()?)
    }
}
