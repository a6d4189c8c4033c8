use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{precondition, Result};

/// Largest entry of `|H H* - N I|` for `H = [e^{2πi dγ/q}]_{d∈D, γ∈Γ}`.
pub fn hadamard_residual(q: u64, digits: &[i64], gamma: &[i64]) -> Result<f64> {
    if q < 2 {
        return precondition(format!("q must be >= 2, got {q}"));
    }
    if digits.is_empty() || digits.len() != gamma.len() {
        return precondition("D and Γ must be nonempty and of equal size");
    }
    let n = digits.len();
    // reduce dγ mod q exactly before converting to an angle
    let entry = |d: i64, g: i64| {
        let r = (i128::from(d) * i128::from(g)).rem_euclid(i128::from(q));
        Complex64::from_polar(1.0, 2.0 * PI * r as f64 / q as f64)
    };
    let h: Vec<Vec<Complex64>> = digits
        .iter()
        .map(|&d| gamma.iter().map(|&g| entry(d, g)).collect())
        .collect();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let dot: Complex64 = (0..n).map(|k| h[i][k] * h[j][k].conj()).sum();
            let target = if i == j { n as f64 } else { 0.0 };
            worst = worst.max((dot - target).norm());
        }
    }
    Ok(worst)
}

/// `(q^{-1} D, Γ)` is a compatible pair up to `tol`.
pub fn hadamard_check(q: u64, digits: &[i64], gamma: &[i64], tol: f64) -> Result<bool> {
    Ok(hadamard_residual(q, digits, gamma)? <= tol)
}
