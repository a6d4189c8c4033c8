use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;

use crate::arith::{frac_nearest_f64, Rational};
use crate::error::{precondition, Result};

/// Below this `|sin πξ|` the closed form is replaced by its limit.
const SINGULAR_SIN: f64 = 1e-12;

/// `(1/|D|) Σ_{d∈D} e^{-2πi d ξ}` for an integer digit set.
pub fn digit_mask_eval(digits: &[i64], xi: f64) -> Complex64 {
    let x = frac_nearest_f64(xi);
    let sum: Complex64 = digits
        .iter()
        .map(|&d| Complex64::from_polar(1.0, -2.0 * PI * d as f64 * x))
        .sum();
    sum / digits.len() as f64
}

/// Mask polynomial `M_N(ξ) = (1/N) Σ_{j<N} e^{-2πijξ}`.
pub fn mask_eval(n: u32, xi: f64) -> Complex64 {
    let x = frac_nearest_f64(xi);
    let sum: Complex64 = (0..n)
        .map(|j| Complex64::from_polar(1.0, -2.0 * PI * f64::from(j) * x))
        .sum();
    sum / f64::from(n)
}

/// `|M_N(ξ)| = |sin Nπξ / (N sin πξ)|`, equal to 1 at integers.
pub fn mask_abs(n: u32, xi: f64) -> f64 {
    let x = frac_nearest_f64(xi);
    let nf = f64::from(n);
    let s = (PI * x).sin();
    if s.abs() < SINGULAR_SIN {
        // l'Hôpital on the removable singularity
        return ((nf * PI * x).cos() / (PI * x).cos()).abs();
    }
    ((nf * PI * x).sin() / (nf * s)).abs()
}

/// `G(ξ) = Σ_{i=1}^{N-1} |M_N(ξ + i/N)|²`.
pub fn g_eval(n: u32, xi: f64) -> f64 {
    (1..n)
        .map(|i| mask_abs(n, xi + f64::from(i) / f64::from(n)).powi(2))
        .sum()
}

/// `|M_N(ξ) - M_d(ξ) M_{N/d}(dξ)|` for a proper divisor `d` of `N`.
pub fn mask_factorization_residual(n: u32, d: u32, xi: f64) -> Result<f64> {
    if d <= 1 || d >= n || n % d != 0 {
        return precondition(format!("{d} is not a proper divisor of {n}"));
    }
    let lhs = mask_eval(n, xi);
    let rhs = mask_eval(d, xi) * mask_eval(n / d, f64::from(d) * frac_nearest_f64(xi));
    Ok((lhs - rhs).norm())
}

/// Exact test for `ξ ∈ {a/N : a ∈ Z \ NZ}`.
pub fn mask_zero_member(n: u32, xi: &Rational) -> bool {
    let nb = BigInt::from(n);
    if !nb.is_multiple_of(xi.denom()) {
        return false;
    }
    let a = xi.numer() * (&nb / xi.denom());
    !a.is_multiple_of(&nb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn mask_examples() {
        assert!((mask_eval(2, 0.0) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(mask_eval(2, 0.5).norm() < 1e-15);
        let expected = (PI / 2.0).sin() / (4.0 * (PI / 8.0).sin());
        assert!((mask_eval(4, 0.125).norm() - expected).abs() < 1e-14);
        assert!((expected - 0.653_281).abs() < 1e-6);
    }

    #[test]
    fn mask_abs_examples() {
        assert!(mask_abs(3, 1.0 / 3.0) < 1e-15);
        for n in 2..9 {
            for k in -3..4 {
                assert_eq!(mask_abs(n, f64::from(k)), 1.0);
            }
        }
        assert!((mask_abs(2, 0.25) - (PI / 4.0).cos()).abs() < 1e-15);
    }

    #[test]
    fn g_examples() {
        for n in 2..8 {
            assert!(g_eval(n, 0.0).abs() < 1e-15);
        }
        assert!((g_eval(2, 0.5) - 1.0).abs() < 1e-15);
        let direct = 1.0 - mask_abs(3, 1.0 / 6.0).powi(2);
        assert!((g_eval(3, 1.0 / 6.0) - direct).abs() < 1e-12);
    }

    #[test]
    fn factorization_examples() {
        assert!(mask_factorization_residual(4, 2, 0.3).unwrap() <= 1e-12);
        assert!(mask_factorization_residual(6, 3, 0.1).unwrap() <= 1e-12);
        assert_eq!(mask_factorization_residual(4, 2, 0.0).unwrap(), 0.0);
        assert!(mask_factorization_residual(6, 4, 0.1).is_err());
        assert!(mask_factorization_residual(6, 6, 0.1).is_err());
        assert!(mask_factorization_residual(6, 1, 0.1).is_err());
    }

    #[test]
    fn zero_member_examples() {
        assert!(mask_zero_member(2, &r("3/2")));
        assert!(!mask_zero_member(2, &r("1")));
        assert!(!mask_zero_member(4, &r("1/3")));
        assert!(mask_zero_member(4, &r("1/2")));
        assert!(mask_zero_member(4, &r("-3/4")));
        assert!(!mask_zero_member(4, &r("0")));
    }

    #[test]
    fn exact_zeros_vanish_numerically() {
        for n in 2..9u32 {
            for a in -40i64..40 {
                let xi = Rational::new(a, i64::from(n)).unwrap();
                if mask_zero_member(n, &xi) {
                    assert!(mask_eval(n, xi.to_f64()).norm() <= 1e-12, "n={n} a={a}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn abs_agrees_with_sum(n in 2u32..9, xi in -50.0f64..50.0) {
            prop_assert!((mask_abs(n, xi) - mask_eval(n, xi).norm()).abs() <= 1e-13);
        }

        #[test]
        fn abs_agrees_near_integers(n in 2u32..9, k in -20i32..20, off in -1e-9f64..1e-9) {
            let xi = f64::from(k) + off;
            prop_assert!((mask_abs(n, xi) - mask_eval(n, xi).norm()).abs() <= 1e-13);
        }

        #[test]
        fn partition_of_unity(n in 2u32..9, xi in 0.0f64..1.0) {
            let total: f64 = (0..n)
                .map(|i| mask_abs(n, xi + f64::from(i) / f64::from(n)).powi(2))
                .sum();
            prop_assert!((total - 1.0).abs() <= 1e-10);
            prop_assert!((g_eval(n, xi) + mask_abs(n, xi).powi(2) - 1.0).abs() <= 1e-12);
        }
    }
}
