use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{precondition, Error, Result};

/// Largest `m` with `q^m | n`.
pub fn valuation(n: &BigInt, q: u64) -> Result<u32> {
    if n.is_zero() {
        return Err(Error::Precondition("valuation of zero".into()));
    }
    if q < 2 {
        return precondition(format!("base must be >= 2, got {q}"));
    }
    let qb = BigInt::from(q);
    let mut rest = n.abs();
    let mut m = 0;
    loop {
        let (quot, rem) = rest.div_rem(&qb);
        if !rem.is_zero() {
            return Ok(m);
        }
        rest = quot;
        m += 1;
    }
}

/// The integer set `{q^m a : m >= 0, a not divisible by N}` for `N | q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QSet {
    q: u64,
    n: u64,
}

impl QSet {
    pub fn new(q: u64, n: u64) -> Result<Self> {
        if n < 2 || q < 2 {
            return precondition(format!("need q >= 2 and N >= 2, got q={q}, N={n}"));
        }
        if q % n != 0 {
            return precondition(format!("N={n} does not divide q={q}"));
        }
        Ok(QSet { q, n })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        if x.is_zero() {
            return false;
        }
        let (qb, nb) = (BigInt::from(self.q), BigInt::from(self.n));
        let mut rest = x.clone();
        loop {
            if !rest.is_multiple_of(&nb) {
                return true;
            }
            if !rest.is_multiple_of(&qb) {
                return false;
            }
            rest /= &qb;
        }
    }

    pub fn contains_i64(&self, x: i64) -> bool {
        if x == 0 {
            return false;
        }
        let (q, n) = (self.q as i128, self.n as i128);
        let mut rest = x as i128;
        loop {
            if rest % n != 0 {
                return true;
            }
            if rest % q != 0 {
                return false;
            }
            rest /= q;
        }
    }
}

/// Membership of `n` in `{q^m a : m >= 0, a in Z \ NZ}`.
pub fn q_set_member(n: &BigInt, q: u64, big_n: u64) -> Result<bool> {
    Ok(QSet::new(q, big_n)?.contains(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(&48.into(), 4).unwrap(), 2);
        assert_eq!(valuation(&12.into(), 4).unwrap(), 1);
        assert_eq!(valuation(&7.into(), 4).unwrap(), 0);
        assert_eq!(valuation(&64.into(), 4).unwrap(), 3);
        assert_eq!(valuation(&(-64).into(), 4).unwrap(), 3);
        assert!(valuation(&0.into(), 4).is_err());
    }

    #[test]
    fn membership_examples() {
        assert!(q_set_member(&4.into(), 4, 2).unwrap());
        assert!(!q_set_member(&2.into(), 4, 2).unwrap());
        assert!(!q_set_member(&0.into(), 4, 2).unwrap());
        assert!(q_set_member(&3.into(), 6, 4).is_err());
    }

    #[test]
    fn membership_matches_explicit_enumeration() {
        for (q, n) in [(4u64, 2u64), (6, 2), (6, 3), (8, 4), (6, 6), (9, 3)] {
            let (max_m, bound) = (4u32, 400i64);
            let mut listed = HashSet::new();
            for m in 0..=max_m {
                for a in -bound..=bound {
                    if a % n as i64 != 0 {
                        listed.insert((q as i64).pow(m) * a);
                    }
                }
            }
            let set = QSet::new(q, n).unwrap();
            // every x in the window has a cofactor of size <= bound at some m <= max_m
            for x in -bound..=bound {
                assert_eq!(set.contains_i64(x), listed.contains(&x), "x={x} q={q} N={n}");
                assert_eq!(set.contains(&x.into()), set.contains_i64(x));
            }
        }
    }
}
