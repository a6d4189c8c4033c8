use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use serde::Serialize;

use super::selection::{admissible_digits, SelectionMap};
use super::SearchOutcome;
use crate::arith::{signed_qadic_expand_i64, QSet};
use crate::error::{precondition, Result};

/// `L ∋ 0` with every difference of distinct elements in the Q-set.
pub fn dset_verify(set: &[i64], q: u64, n: u32) -> Result<bool> {
    let qs = QSet::new(q, u64::from(n))?;
    if !set.contains(&0) {
        return Ok(false);
    }
    Ok(set.iter().enumerate().all(|(i, &a)| {
        set[i + 1..].iter().all(|&b| qs.contains_i64(a - b))
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    /// `(t, ℓ)`: window point `t ∉ L` and an element `ℓ ∈ L` with `t - ℓ` outside the Q-set.
    pub blocked: Vec<(i64, i64)>,
    /// Window points that could be added to `L` without breaking the D-set property.
    pub violations: Vec<i64>,
}

impl WindowReport {
    pub fn is_maximal(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every `t ∈ [-window, window] \ L` is blocked by some `ℓ ∈ L ∩ [-witness, witness]`.
///
/// A clean report is evidence of maximality on the window only.
pub fn dset_window_maximality(
    set: &[i64],
    q: u64,
    n: u32,
    window: i64,
    witness: i64,
) -> Result<WindowReport> {
    let qs = QSet::new(q, u64::from(n))?;
    if window < 0 || witness < 0 {
        return precondition("window and witness radius must be >= 0");
    }
    let members: BTreeSet<i64> = set.iter().copied().collect();
    let witnesses: Vec<i64> = members.iter().copied().filter(|l| l.abs() <= witness).collect();
    let mut report = WindowReport { blocked: Vec::new(), violations: Vec::new() };
    for t in (-window..=window).filter(|t| !members.contains(t)) {
        match witnesses.iter().find(|&&l| !qs.contains_i64(t - l)) {
            Some(&l) => report.blocked.push((t, l)),
            None => report.violations.push(t),
        }
    }
    Ok(report)
}

struct Graph {
    points: Vec<i64>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    fn new(qs: &QSet, points: Vec<i64>) -> Self {
        let adj = points
            .iter()
            .map(|&a| points.iter().map(|&b| a != b && qs.contains_i64(a - b)).collect())
            .collect();
        Graph { points, adj }
    }
}

fn window_graph(q: u64, n: u32, window: i64) -> Result<(QSet, Graph)> {
    let qs = QSet::new(q, u64::from(n))?;
    if window < 0 {
        return precondition("window must be >= 0");
    }
    // 0 first, then neighbours of 0 in increasing order
    let points = std::iter::once(0)
        .chain((-window..=window).filter(|&t| qs.contains_i64(t)))
        .collect();
    Ok((qs, Graph::new(&qs, points)))
}

fn sorted_set(graph: &Graph, idx: &[usize]) -> Vec<i64> {
    let mut out: Vec<i64> = idx.iter().map(|&i| graph.points[i]).collect();
    out.sort_unstable();
    out
}

/// All D-sets inside `[-window, window]` that are maximal within the window
/// (Bron–Kerbosch with pivoting), sorted.
pub fn brute_force_maximal_dsets(
    q: u64,
    n: u32,
    window: i64,
    budget: u64,
) -> Result<SearchOutcome<Vec<Vec<i64>>>> {
    let (_, graph) = window_graph(q, n, window)?;
    let mut found = Vec::new();
    let mut nodes = 0u64;
    let candidates: Vec<usize> = (1..graph.points.len()).collect();
    let complete = bron_kerbosch(&graph, &mut vec![0], candidates, Vec::new(), &mut found, &mut nodes, budget);
    found.sort();
    Ok(SearchOutcome { value: found, complete, nodes })
}

fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<usize>,
    p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<i64>>,
    nodes: &mut u64,
    budget: u64,
) -> bool {
    *nodes += 1;
    if *nodes > budget {
        return false;
    }
    if p.is_empty() && x.is_empty() {
        out.push(sorted_set(g, r));
        return true;
    }
    let pivot = p
        .iter()
        .chain(&x)
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| g.adj[u][v]).count())
        .expect("p or x nonempty");
    let mut p = p;
    for v in p.clone().into_iter().filter(|&v| !g.adj[pivot][v]) {
        r.push(v);
        let p2 = p.iter().copied().filter(|&w| g.adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| g.adj[v][w]).collect();
        let ok = bron_kerbosch(g, r, p2, x2, out, nodes, budget);
        r.pop();
        if !ok {
            return false;
        }
        p.retain(|&w| w != v);
        x.push(v);
    }
    true
}

/// Window D-sets `S` that extend to a D-set `E ⊂ [-witness, witness]` with
/// `E ∩ [-window, window] = S` blocking every other window point.
pub fn brute_force_witnessed_dsets(
    q: u64,
    n: u32,
    window: i64,
    witness: i64,
    budget: u64,
) -> Result<SearchOutcome<Vec<Vec<i64>>>> {
    if witness < window {
        return precondition("witness radius must be >= window");
    }
    let (qs, graph) = window_graph(q, n, window)?;
    let outside: Vec<i64> = (-witness..=witness).filter(|t| t.abs() > window).collect();
    let mut cliques = Vec::new();
    let mut nodes = 0u64;
    let mut complete = all_cliques(&graph, &mut vec![0], 1, &mut cliques, &mut nodes, budget);
    let mut found = Vec::new();
    for clique in cliques {
        if !complete {
            break;
        }
        let set = sorted_set(&graph, &clique);
        match extends_to_blocking(&qs, &set, window, &outside, &mut nodes, budget) {
            Some(true) => found.push(set),
            Some(false) => {}
            None => complete = false,
        }
    }
    found.sort();
    Ok(SearchOutcome { value: found, complete, nodes })
}

fn all_cliques(
    g: &Graph,
    r: &mut Vec<usize>,
    from: usize,
    out: &mut Vec<Vec<usize>>,
    nodes: &mut u64,
    budget: u64,
) -> bool {
    *nodes += 1;
    if *nodes > budget {
        return false;
    }
    out.push(r.clone());
    for v in from..g.points.len() {
        if r.iter().all(|&u| g.adj[u][v]) {
            r.push(v);
            let ok = all_cliques(g, r, v + 1, out, nodes, budget);
            r.pop();
            if !ok {
                return false;
            }
        }
    }
    true
}

/// `None` when the budget runs out.
fn extends_to_blocking(
    qs: &QSet,
    set: &[i64],
    window: i64,
    outside: &[i64],
    nodes: &mut u64,
    budget: u64,
) -> Option<bool> {
    let unblocked: Vec<i64> = (-window..=window)
        .filter(|t| !set.contains(t) && set.iter().all(|&l| qs.contains_i64(t - l)))
        .collect();
    let pool: Vec<i64> = outside
        .iter()
        .copied()
        .filter(|&e| set.iter().all(|&l| qs.contains_i64(e - l)))
        .collect();
    cover(qs, &unblocked, &pool, nodes, budget)
}

fn cover(qs: &QSet, unblocked: &[i64], pool: &[i64], nodes: &mut u64, budget: u64) -> Option<bool> {
    *nodes += 1;
    if *nodes > budget {
        return None;
    }
    // branch on the point with fewest possible blockers
    let mut best: Option<Vec<i64>> = None;
    for &t in unblocked {
        let blockers: Vec<i64> = pool.iter().copied().filter(|&e| !qs.contains_i64(t - e)).collect();
        if blockers.is_empty() {
            return Some(false);
        }
        if best.as_ref().is_none_or(|b| blockers.len() < b.len()) {
            best = Some(blockers);
        }
    }
    let Some(blockers) = best else {
        return Some(true);
    };
    for e in blockers {
        let rest: Vec<i64> = unblocked.iter().copied().filter(|&t| qs.contains_i64(t - e)).collect();
        let pool2: Vec<i64> = pool.iter().copied().filter(|&f| f != e && qs.contains_i64(f - e)).collect();
        match cover(qs, &rest, &pool2, nodes, budget) {
            Some(false) => {}
            other => return other,
        }
    }
    Some(false)
}

/// Restrictions to `[-window, window]` of `ι*(Ω)` over all selection maps.
///
/// Let `D` be the longest signed expansion of a window point. Maps of depth `D`
/// are enumerated; digits at depth `D + 1` can only move a word's value out of
/// the window, one word at a time, which is possible exactly when `q > N`.
pub fn window_images(
    q: u64,
    n: u32,
    window: i64,
    budget: u64,
) -> Result<SearchOutcome<Vec<Vec<i64>>>> {
    QSet::new(q, u64::from(n))?;
    if window < 0 {
        return precondition("window must be >= 0");
    }
    let depth = (-window..=window)
        .filter_map(|t| signed_qadic_expand_i64(t, q).ok())
        .map(|d| d.len())
        .max()
        .unwrap_or(0)
        .max(1);
    let template = SelectionMap::canonical(n, q, depth)?;
    let free: Vec<(super::selection::Word, Vec<i64>)> = template
        .entries()
        .filter(|(w, _)| !w.is_zero_word())
        .map(|(w, _)| {
            let choices = admissible_digits(w.last().expect("nonempty"), n, q);
            (w, choices)
        })
        .collect();
    let domain = template.domain(depth);
    let mut counter = vec![0usize; free.len()];
    let mut images = BTreeSet::new();
    let mut nodes = 0u64;
    let mut map = template;
    loop {
        nodes += 1;
        if nodes > budget {
            return Ok(SearchOutcome { value: images.into_iter().collect(), complete: false, nodes });
        }
        for ((word, choices), &c) in free.iter().zip(&counter) {
            map.set_digit(word, choices[c])?;
        }
        let mut image: Vec<i64> = domain
            .iter()
            .map(|w| map.iota_star(w))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter_map(|v| v.to_i64())
            .filter(|v| v.abs() <= window)
            .collect();
        image.sort_unstable();
        images.insert(image);
        // odometer over the free words
        let mut i = 0;
        loop {
            if i == counter.len() {
                if q > u64::from(n) {
                    images = removal_closure(images);
                }
                return Ok(SearchOutcome { value: images.into_iter().collect(), complete: true, nodes });
            }
            counter[i] += 1;
            if counter[i] < free[i].1.len() {
                break;
            }
            counter[i] = 0;
            i += 1;
        }
    }
}

/// Closes a family under deleting nonzero elements.
fn removal_closure(family: BTreeSet<Vec<i64>>) -> BTreeSet<Vec<i64>> {
    let mut closed = BTreeSet::new();
    let mut stack: Vec<Vec<i64>> = family.into_iter().collect();
    while let Some(set) = stack.pop() {
        if !closed.insert(set.clone()) {
            continue;
        }
        for (i, &x) in set.iter().enumerate() {
            if x != 0 {
                let mut smaller = set.clone();
                smaller.remove(i);
                if !closed.contains(&smaller) {
                    stack.push(smaller);
                }
            }
        }
    }
    closed
}

#[cfg(test)]
mod tests {
    use super::*;

    const BIG: u64 = 10_000_000;

    #[test]
    fn verify_examples() {
        assert!(dset_verify(&[0, 1, 4, 5], 4, 2).unwrap());
        assert!(!dset_verify(&[0, 2], 4, 2).unwrap());
        assert!(!dset_verify(&[1, 5], 4, 2).unwrap());
        assert!(dset_verify(&[0], 4, 2).unwrap());
        assert!(dset_verify(&[0, 1], 6, 4).is_err());
    }

    #[test]
    fn brute_force_small_windows() {
        let one = brute_force_maximal_dsets(4, 2, 1, BIG).unwrap();
        assert!(one.complete);
        assert_eq!(one.value, vec![vec![-1, 0], vec![0, 1]]);
        assert_eq!(brute_force_maximal_dsets(4, 2, 0, BIG).unwrap().value, vec![vec![0]]);
    }

    #[test]
    fn brute_force_sets_are_dsets_and_window_maximal() {
        for (q, n, b) in [(4, 2, 15), (6, 3, 12), (6, 2, 10)] {
            let sets = brute_force_maximal_dsets(q, n, b, BIG).unwrap();
            assert!(sets.complete);
            for s in &sets.value {
                assert!(dset_verify(s, q, n).unwrap());
                assert!(dset_window_maximality(s, q, n, b, b).unwrap().is_maximal());
            }
        }
        assert_eq!(brute_force_maximal_dsets(4, 2, 15, BIG).unwrap().value.len(), 16);
    }

    #[test]
    fn budget_is_reported() {
        let out = brute_force_maximal_dsets(4, 2, 15, 3).unwrap();
        assert!(!out.complete);
        assert!(out.into_result(3).is_err());
    }

    #[test]
    fn window_report_lists_witnesses() {
        let report = dset_window_maximality(&[0, 1], 4, 2, 2, 2).unwrap();
        assert!(report.violations.is_empty());
        assert!(report.blocked.contains(&(2, 0)));
        let report = dset_window_maximality(&[0], 4, 2, 1, 1).unwrap();
        assert_eq!(report.violations, vec![-1, 1]);
    }

    #[test]
    fn images_match_witnessed_family_on_small_window() {
        for (q, n, b) in [(4, 2, 5), (6, 3, 6), (6, 2, 6), (4, 4, 6), (3, 3, 5)] {
            let images = window_images(q, n, b, BIG).unwrap();
            let witnessed = brute_force_witnessed_dsets(q, n, b, 8 * b, BIG).unwrap();
            assert!(images.complete && witnessed.complete);
            assert_eq!(images.value, witnessed.value, "q={q} N={n} B={b}");
            for s in &images.value {
                assert!(dset_verify(s, q, n).unwrap());
            }
        }
    }
}
