use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{precondition, Result};

/// Base-`q` expansion with digits drawn from `{-1, 0, 1, ..., q-2}`.
///
/// `digits[i]` is the coefficient of `q^i`; the list is trimmed so the last
/// digit is nonzero, and zero is the empty list.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedDigits {
    digits: Vec<i64>,
    base: u64,
}

impl SignedDigits {
    pub fn new(mut digits: Vec<i64>, base: u64) -> Result<Self> {
        if base < 2 {
            return precondition(format!("base must be >= 2, got {base}"));
        }
        let top = base as i64 - 2;
        if let Some(d) = digits.iter().find(|&&d| d < -1 || d > top) {
            return precondition(format!("digit {d} outside [-1, {top}]"));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(SignedDigits { digits, base })
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn evaluate(&self) -> BigInt {
        let q = BigInt::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &d| acc * &q + d)
    }
}

/// Unique expansion of `n` over the signed digit set `{-1, ..., q-2}`.
///
/// Each step takes `a = ((n + 1) mod q) - 1` and continues with `(n - a) / q`.
/// For `q = 2` the digit set is `{-1, 0}`, so positive integers have no finite
/// expansion and are rejected.
pub fn signed_qadic_expand(n: &BigInt, q: u64) -> Result<SignedDigits> {
    if q < 2 {
        return precondition(format!("base must be >= 2, got {q}"));
    }
    if q == 2 && n.is_positive() {
        return precondition(format!("{n} has no finite expansion over digits {{-1, 0}}"));
    }
    let qb = BigInt::from(q);
    let mut rest = n.clone();
    let mut digits = Vec::new();
    while !rest.is_zero() {
        let a: BigInt = (&rest + 1u32).mod_floor(&qb) - 1u32;
        rest = (&rest - &a) / &qb;
        digits.push(a.to_i64().expect("digit fits in i64"));
    }
    Ok(SignedDigits { digits, base: q })
}

pub fn signed_qadic_expand_i64(n: i64, q: u64) -> Result<SignedDigits> {
    signed_qadic_expand(&BigInt::from(n), q)
}
