//! Parallel enumeration of all numberings of `{0..M}`.
//!
//! The permutation sequence is split into fixed blocks by their first two
//! entries. Block boundaries depend only on `M`, and every reduction below
//! is either exactly associative (max, all) or order-preserving (find-first,
//! ordered collect), so results do not depend on thread scheduling.

use rayon::prelude::*;

/// `m!`, saturating.
pub fn factorial(m: usize) -> u128 {
    (1..=m as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// Advances `v` to the next permutation in lexicographic order; returns
/// `false` (leaving `v` sorted ascending) after the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn prefixes(m: usize) -> Vec<Vec<usize>> {
    match m {
        0 => vec![vec![]],
        1 => vec![vec![0]],
        _ => (0..m)
            .flat_map(|a| (0..m).filter(move |&b| b != a).map(move |b| vec![a, b]))
            .collect(),
    }
}

/// Visits every permutation with the given prefix in lexicographic order
/// until `f` returns `false`. Returns `false` if stopped early.
fn scan_block<F: FnMut(&[usize]) -> bool>(m: usize, prefix: &[usize], mut f: F) -> bool {
    let mut perm: Vec<usize> = prefix.to_vec();
    perm.extend((0..m).filter(|x| !prefix.contains(x)));
    let k = prefix.len();
    loop {
        if !f(&perm) {
            return false;
        }
        if !next_permutation(&mut perm[k..]) {
            return true;
        }
    }
}

/// Maximum of `score` over all numberings.
pub fn par_max<F>(m: usize, score: F) -> f64
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    prefixes(m)
        .par_iter()
        .map(|p| {
            let mut best = f64::NEG_INFINITY;
            scan_block(m, p, |perm| {
                best = best.max(score(perm));
                true
            });
            best
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Lexicographically first numbering satisfying `pred`.
pub fn par_find_first<F>(m: usize, pred: F) -> Option<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    prefixes(m).par_iter().find_map_first(|p| {
        let mut found = None;
        scan_block(m, p, |perm| {
            if pred(perm) {
                found = Some(perm.to_vec());
                false
            } else {
                true
            }
        });
        found
    })
}

/// Up to `limit` numberings satisfying `pred`, in lexicographic order.
pub fn par_filter<F>(m: usize, pred: F, limit: usize) -> Vec<Vec<usize>>
where
    F: Fn(&[usize]) -> bool + Sync,
{
    let blocks: Vec<Vec<Vec<usize>>> = prefixes(m)
        .par_iter()
        .map(|p| {
            let mut hits = Vec::new();
            scan_block(m, p, |perm| {
                if pred(perm) {
                    hits.push(perm.to_vec());
                }
                hits.len() < limit
            });
            hits
        })
        .collect();
    blocks.into_iter().flatten().take(limit).collect()
}

/// True iff `pred` holds for every numbering.
pub fn par_all<F>(m: usize, pred: F) -> bool
where
    F: Fn(&[usize]) -> bool + Sync,
{
    prefixes(m).par_iter().all(|p| scan_block(m, p, &pred))
}

/// Maximizer of `score`, ties within `tie_tol` of the maximum broken by
/// the lexicographically smallest numbering.
pub fn par_argmax<F>(m: usize, score: F, tie_tol: f64) -> (Vec<usize>, f64)
where
    F: Fn(&[usize]) -> f64 + Sync,
{
    let best = par_max(m, &score);
    let threshold = best - tie_tol * best.abs().max(1.0);
    let perm = par_find_first(m, |p| score(p) >= threshold).expect("maximum is attained");
    let value = score(&perm);
    (perm, value)
}
