use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::Precondition("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(numer.into(), denom)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Precondition("reciprocal of zero".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn pow(&self, exp: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, exp))
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Representative of `self` modulo 1 in `(-1/2, 1/2]`.
    pub fn frac_nearest(&self) -> Rational {
        // x - ceil(x - 1/2) lies in (-1/2, 1/2]
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let shift = (&self.0 - half).ceil();
        Rational(&self.0 - shift)
    }

    pub fn dist_to_int(&self) -> Rational {
        self.frac_nearest().abs()
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac_floor(&self) -> Rational {
        let (n, d) = (self.numer(), self.denom());
        Rational(BigRational::new(n.mod_floor(d), d.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| {
            if self.0.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl From<BigInt> for Rational {
    fn from(n: BigInt) -> Self {
        Rational::from_integer(n)
    }
}

/// Integers print without a denominator, everything else as `num/den`.
impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                Rational::new(n, d).map_err(|_| bad())
            }
            None => s.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Division by zero panics, mirroring the underlying big-rational type.
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Nearest-representative of a float modulo 1 in `(-1/2, 1/2]`.
///
/// Ties are rounded toward negative infinity so that `0.5` maps to itself.
pub fn frac_nearest_f64(x: f64) -> f64 {
    let r = x - (x - 0.5).ceil();
    if r <= -0.5 {
        r + 1.0
    } else {
        r
    }
}

pub fn dist_to_int_f64(x: f64) -> f64 {
    frac_nearest_f64(x).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes_on_construction() {
        let x = Rational::new(6, -4).unwrap();
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert!(Rational::new(1, 0).is_err());
        assert_eq!(r("2/6"), r("1/3"));
    }

    #[test]
    fn frac_nearest_examples() {
        assert_eq!(r("0").frac_nearest(), r("0"));
        assert_eq!(r("7/4").frac_nearest(), r("-1/4"));
        assert_eq!(r("1/2").frac_nearest(), r("1/2"));
        assert_eq!(r("-1/2").frac_nearest(), r("1/2"));
        assert_eq!(r("3").dist_to_int(), r("0"));
        assert_eq!(r("7/4").dist_to_int(), r("1/4"));
    }

    #[test]
    fn frac_nearest_float_examples() {
        assert_eq!(frac_nearest_f64(0.0), 0.0);
        assert_eq!(frac_nearest_f64(1.75), -0.25);
        assert_eq!(frac_nearest_f64(0.5), 0.5);
        assert_eq!(frac_nearest_f64(-0.5), 0.5);
        assert!((dist_to_int_f64(-0.3) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(r("10/5").to_string(), "2");
        assert_eq!(r("-4/6").to_string(), "-2/3");
    }

    proptest! {
        #[test]
        fn frac_nearest_is_idempotent_and_integral(n in -10_000i64..10_000, d in 1i64..500) {
            let x = Rational::new(n, d).unwrap();
            let f = x.frac_nearest();
            prop_assert_eq!(f.frac_nearest(), f.clone());
            prop_assert!((&x - &f).is_integer());
            prop_assert!(f > r("-1/2") && f <= r("1/2"));
        }

        #[test]
        fn float_frac_nearest_in_range(x in -1e6f64..1e6) {
            let f = frac_nearest_f64(x);
            prop_assert!(f > -0.5 && f <= 0.5);
            prop_assert!(((x - f) - (x - f).round()).abs() < 1e-6);
        }
    }
}
