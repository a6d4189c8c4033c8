use std::cmp::Ordering;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::SearchOutcome;
use crate::arith::Rational;
use crate::error::{precondition, Error, Result};
use crate::measure::{muhat_zero_member, MeasureSpec};

/// Candidates `ρ^{-k} a/N` for `1 <= k <= kmax`, `0 < |a| <= amax`, `N ∤ a`,
/// ordered by `|λ|` with the positive sign first.
pub fn clique_pool(spec: &MeasureSpec, kmax: u32, amax: u64) -> Result<Vec<Rational>> {
    let rho = spec
        .rho_rational()
        .ok_or_else(|| Error::Precondition("ρ must be rational".into()))?;
    if kmax == 0 || amax == 0 {
        return precondition("kmax and amax must be >= 1");
    }
    let n = i64::from(spec.n());
    let mut pool = Vec::new();
    for k in 1..=kmax {
        let scale = rho.pow(-(k as i32)) / Rational::from(n);
        for a in 1..=amax as i64 {
            if a % n != 0 {
                pool.push(&scale * &Rational::from(a));
                pool.push(&scale * &Rational::from(-a));
            }
        }
    }
    pool.sort_by(|x, y| match x.abs().cmp(&y.abs()) {
        Ordering::Equal => y.cmp(x),
        o => o,
    });
    pool.dedup();
    Ok(pool)
}

/// Largest set `{0} ∪ C`, `C` drawn from [`clique_pool`], with every
/// difference a zero of `μ̂`. Stops early once `target` elements are found.
pub fn orthogonal_clique_search(
    spec: &MeasureSpec,
    kmax: u32,
    amax: u64,
    target: Option<usize>,
    budget: u64,
) -> Result<SearchOutcome<Vec<Rational>>> {
    let pool = clique_pool(spec, kmax, amax)?;
    let adj: Vec<Vec<bool>> = pool
        .par_iter()
        .map(|a| {
            pool.iter()
                .map(|b| a != b && muhat_zero_member(spec, &(a - b)).unwrap_or(false))
                .collect()
        })
        .collect();
    let mut search = Search { adj: &adj, best: Vec::new(), nodes: 0, budget, target, stop: false };
    // every pool element is itself a zero, so all are compatible with 0
    search.expand(&mut Vec::new(), (0..pool.len()).collect());
    let mut clique: Vec<Rational> = std::iter::once(Rational::zero())
        .chain(search.best.iter().map(|&i| pool[i].clone()))
        .collect();
    clique.sort();
    let complete = search.nodes <= budget;
    Ok(SearchOutcome { value: clique, complete, nodes: search.nodes })
}

struct Search<'a> {
    adj: &'a [Vec<bool>],
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    target: Option<usize>,
    stop: bool,
}

impl Search<'_> {
    fn expand(&mut self, current: &mut Vec<usize>, candidates: Vec<usize>) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.stop = true;
            return;
        }
        if current.len() > self.best.len() {
            self.best = current.clone();
            if self.target.is_some_and(|t| self.best.len() + 1 >= t) {
                self.stop = true;
                return;
            }
        }
        for (pos, &v) in candidates.iter().enumerate() {
            if self.stop || current.len() + candidates.len() - pos <= self.best.len() {
                return;
            }
            let next = candidates[pos + 1..].iter().copied().filter(|&w| self.adj[v][w]).collect();
            current.push(v);
            self.expand(current, next);
            current.pop();
        }
    }
}

/// Integer frequencies of a clique, when all are integers.
pub fn integer_elements(set: &[Rational]) -> Option<Vec<BigInt>> {
    set.iter().map(|x| x.is_integer().then(|| x.numer().clone())).collect()
}
