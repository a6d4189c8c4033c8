use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::Rational;
use crate::error::Result;
use crate::measure::{muhat_shifted, MeasureSpec, ShiftTable, TruncationBudget};
use crate::spectra::BiZeroSet;

/// Precomputed shifts for repeated `Q(ξ)` evaluations with `|ξ| <= max_abs_xi`.
#[derive(Debug, Clone)]
pub struct QEvaluator {
    spec: MeasureSpec,
    tables: Vec<ShiftTable>,
    term_budget: TruncationBudget,
    eps: f64,
}

impl QEvaluator {
    pub fn new(spec: &MeasureSpec, elements: &[Rational], eps: f64, max_abs_xi: f64) -> Result<Self> {
        TruncationBudget::new(eps)?;
        let term_budget = TruncationBudget::new(eps / elements.len().max(1) as f64)?;
        let tables = elements
            .par_iter()
            .map(|l| {
                let (factors, _) = term_budget.cutoff(spec, l.to_f64().abs() + max_abs_xi);
                ShiftTable::new(spec, l, factors)
            })
            .collect();
        Ok(QEvaluator { spec: spec.clone(), tables, term_budget, eps })
    }

    /// `Σ_λ |μ̂(ξ + λ)|²` and its error bound `3ε`.
    pub fn eval(&self, xi: f64) -> (f64, f64) {
        let value = self
            .tables
            .iter()
            .map(|t| muhat_shifted(&self.spec, xi, t, &self.term_budget).value.norm_sqr())
            .sum();
        (value, 3.0 * self.eps)
    }
}

/// `Q(ξ)` for a finite bi-zero set with total product tolerance `eps`.
pub fn q_function(set: &BiZeroSet, xi: f64, eps: f64) -> Result<(f64, f64)> {
    Ok(QEvaluator::new(&set.spec, &set.elements, eps, xi.abs())?.eval(xi))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QScanResult {
    pub xi: Vec<f64>,
    pub q_values: Vec<f64>,
    pub error_bounds: Vec<f64>,
    pub lambda_size: usize,
    pub depth: Option<usize>,
    pub tolerance: f64,
}

impl QScanResult {
    /// `(argmin, min)`, `None` for an empty grid.
    pub fn min(&self) -> Option<(f64, f64)> {
        self.xi
            .iter()
            .zip(&self.q_values)
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(&x, &q)| (x, q))
    }

    pub fn max_error_bound(&self) -> f64 {
        self.error_bounds.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("xi,q_value,error_bound\n");
        for ((x, q), e) in self.xi.iter().zip(&self.q_values).zip(&self.error_bounds) {
            writeln!(out, "{x:.16e},{q:.16e},{e:.16e}").expect("writing to a String");
        }
        out
    }
}

/// 101 points `k/101` followed by 20 seeded uniform points in `[0, 1)`.
pub fn default_grid(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..101)
        .map(|k| f64::from(k) / 101.0)
        .chain((0..20).map(|_| rng.gen::<f64>()))
        .collect()
}

/// Evaluates `Q` over `grid` in parallel; results keep grid order.
pub fn q_deficit_scan(set: &BiZeroSet, grid: &[f64], eps: f64) -> Result<QScanResult> {
    let max_abs = grid.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let eval = QEvaluator::new(&set.spec, &set.elements, eps, max_abs)?;
    let (q_values, error_bounds) = grid.par_iter().map(|&x| eval.eval(x)).unzip();
    Ok(QScanResult {
        xi: grid.to_vec(),
        q_values,
        error_bounds,
        lambda_size: set.len(),
        depth: set.depth,
        tolerance: eps,
    })
}
