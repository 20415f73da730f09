//! The qubit guesswork problem as a quadratic assignment problem.
//!
//! For a numbering `n` the objective is
//! `sum_{t,t'} C[t][t'] B[n(t)][n(t')]` with `C = Gram(gamma - mean)` and
//! `B = Gram(v ∘ rho)`. Its maximum over numberings determines the minimum
//! guesswork. Besides exhaustive search this module implements the
//! benevolent fast path: when `-B` is permutationally equivalent to a
//! symmetric Toeplitz matrix with a monotone, mirror-dominated first column,
//! the zig-zag numbering is optimal.

use nalgebra::DMatrix;

use crate::costs::{cost_gram, CostFunction};
use crate::ensembles::Ensemble;
use crate::enumerate::par_argmax;
use crate::error::{Error, Result};
use crate::numbering::Numbering;

/// Default cap on `M` for exhaustive enumeration (`10! ≈ 3.6e6`).
pub const DEFAULT_FACTORIAL_CAP: usize = 10;
/// Environment variable overriding the factorial cap.
pub const FACTORIAL_CAP_ENV: &str = "GUESSWORK_FACTORIAL_CAP";
/// Relative tolerance under which two objective values count as tied.
pub const TIE_TOL: f64 = 1e-12;
/// Tolerance used when checking benevolence.
pub const BENEVOLENCE_TOL: f64 = 1e-10;

/// Factorial cap from [`FACTORIAL_CAP_ENV`], falling back to the default.
pub fn factorial_cap_from_env() -> usize {
    std::env::var(FACTORIAL_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_FACTORIAL_CAP)
}

fn check_cap(m: usize, cap: usize) -> Result<()> {
    if m > cap {
        Err(Error::CapExceeded { m, cap })
    } else {
        Ok(())
    }
}

fn is_symmetric(a: &DMatrix<f64>, tol: f64) -> bool {
    a.is_square() && (0..a.nrows()).all(|i| (0..i).all(|j| (a[(i, j)] - a[(j, i)]).abs() <= tol))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QapInstance {
    cost_gram: DMatrix<f64>,
    bloch_gram: DMatrix<f64>,
}

impl QapInstance {
    pub fn new(cost_gram: DMatrix<f64>, bloch_gram: DMatrix<f64>) -> Result<Self> {
        if !cost_gram.is_square() {
            return Err(Error::NotSquare { rows: cost_gram.nrows(), cols: cost_gram.ncols() });
        }
        if cost_gram.shape() != bloch_gram.shape() {
            return Err(Error::Size { expected: cost_gram.nrows(), got: bloch_gram.nrows() });
        }
        for g in [&cost_gram, &bloch_gram] {
            if !is_symmetric(g, 1e-12) {
                return Err(Error::InvalidArgument("QAP matrices must be symmetric".into()));
            }
        }
        Ok(Self { cost_gram, bloch_gram })
    }

    /// Instance for a qubit ensemble and cost, `shift` added to the
    /// centered cost coefficients.
    pub fn from_problem(e: &Ensemble, c: &CostFunction, shift: f64) -> Result<Self> {
        if e.len() != c.len() {
            return Err(Error::Size { expected: e.len(), got: c.len() });
        }
        Self::new(cost_gram(c, shift), bloch_gram(e)?)
    }

    pub fn size(&self) -> usize {
        self.cost_gram.nrows()
    }

    pub fn cost_gram(&self) -> &DMatrix<f64> {
        &self.cost_gram
    }

    pub fn bloch_gram(&self) -> &DMatrix<f64> {
        &self.bloch_gram
    }

    fn objective_raw(&self, n: &[usize]) -> f64 {
        let mut acc = 0.0;
        for (t, &row) in n.iter().enumerate() {
            for (u, &col) in n.iter().enumerate() {
                acc += self.cost_gram[(t, u)] * self.bloch_gram[(row, col)];
            }
        }
        acc
    }
}

/// `G_ij = v(rho(i)) . v(rho(j))`.
pub fn bloch_gram(e: &Ensemble) -> Result<DMatrix<f64>> {
    let b = e.bloch_vectors()?;
    Ok(DMatrix::from_fn(b.len(), b.len(), |i, j| b[i].dot(&b[j])))
}

pub fn qap_objective(inst: &QapInstance, n: &Numbering) -> Result<f64> {
    if n.len() != inst.size() {
        return Err(Error::Size { expected: inst.size(), got: n.len() });
    }
    Ok(inst.objective_raw(n.as_slice()))
}

/// Exhaustive maximization; ties go to the lexicographically smallest
/// numbering.
pub fn brute_force_solve(inst: &QapInstance, cap: usize) -> Result<(Numbering, f64)> {
    check_cap(inst.size(), cap)?;
    let (perm, value) = par_argmax(inst.size(), |p| inst.objective_raw(p), TIE_TOL);
    Ok((Numbering::from_vec_unchecked(perm), value))
}

/// Outcome of a benevolence test. Indices are one-based, matching the
/// `A[m+1][1]` notation of the two properties.
#[derive(Clone, Debug, PartialEq)]
pub struct BenevolenceReport {
    pub is_symmetric_toeplitz: bool,
    pub property1_ok: bool,
    pub property2_ok: bool,
    pub failing_index: Option<usize>,
    pub witness_permutation: Option<Numbering>,
}

impl BenevolenceReport {
    pub fn is_benevolent(&self) -> bool {
        self.is_symmetric_toeplitz && self.property1_ok && self.property2_ok
    }
}

/// Checks symmetry, the Toeplitz structure and
/// 1. `A[m+1][1]` non-decreasing for `m = 1..=M/2`,
/// 2. `A[M+1-m][1] >= A[m+1][1]` for `m = 1..=M/2`.
pub fn is_benevolent(a: &DMatrix<f64>, tol: f64) -> BenevolenceReport {
    let n = a.nrows();
    let square = a.is_square();
    let toeplitz = square
        && (0..n).all(|i| (0..n).all(|j| {
            let k = i.min(j);
            (a[(i, j)] - a[(i - k, j - k)]).abs() <= tol
        }));
    let sym_toeplitz = toeplitz && is_symmetric(a, tol);
    if !square {
        return BenevolenceReport {
            is_symmetric_toeplitz: false,
            property1_ok: false,
            property2_ok: false,
            failing_index: None,
            witness_permutation: None,
        };
    }
    let half = n / 2;
    let col = |r: usize| a[(r, 0)];
    // zero-based row m holds the one-based entry A[m+1][1]
    let p1_fail = (1..half).find(|&m| col(m) > col(m + 1) + tol);
    let p2_fail = (1..=half).find(|&m| col(n - m) < col(m) - tol);
    let property1_ok = p1_fail.is_none();
    let property2_ok = p2_fail.is_none();
    let failing_index = p1_fail.or(p2_fail);
    let ok = sym_toeplitz && property1_ok && property2_ok;
    BenevolenceReport {
        is_symmetric_toeplitz: sym_toeplitz,
        property1_ok,
        property2_ok,
        failing_index,
        witness_permutation: ok.then(|| Numbering::identity(n)),
    }
}

/// `B[i][j] = A[sigma(i)][sigma(j)]`.
pub fn conjugate(a: &DMatrix<f64>, sigma: &Numbering) -> DMatrix<f64> {
    DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(sigma.apply(i), sigma.apply(j))])
}

/// Rotations and reflections of the cyclic labeling, identity first.
fn cyclic_candidates(m: usize) -> Vec<Numbering> {
    let mut out = Vec::with_capacity(2 * m);
    for s in 0..m {
        out.push(Numbering::from_vec_unchecked((0..m).map(|i| (s + i) % m).collect()));
        out.push(Numbering::from_vec_unchecked((0..m).map(|i| (s + m - i) % m).collect()));
    }
    out
}

/// Depth-first search over `sigma` with Toeplitz and monotonicity pruning.
fn search_benevolent(a: &DMatrix<f64>, tol: f64) -> Option<Numbering> {
    let m = a.nrows();
    let half = m / 2;
    let mut sigma = Vec::with_capacity(m);
    let mut used = vec![false; m];

    fn extend(
        a: &DMatrix<f64>,
        tol: f64,
        half: usize,
        sigma: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let m = a.nrows();
        let k = sigma.len();
        if k == m {
            let perm = Numbering::from_vec_unchecked(sigma.clone());
            return is_benevolent(&conjugate(a, &perm), tol).is_benevolent();
        }
        for cand in 0..m {
            if used[cand] {
                continue;
            }
            let b = |i: usize, j: usize| {
                let x = if i == k { cand } else { sigma[i] };
                let y = if j == k { cand } else { sigma[j] };
                a[(x, y)]
            };
            let diag_ok = k == 0 || (b(k, k) - b(0, 0)).abs() <= tol;
            let toeplitz_ok = diag_ok && (1..k).all(|j| (b(k, j) - b(k - j, 0)).abs() <= tol);
            let monotone_ok = !(2..=half).contains(&k) || b(k, 0) + tol >= b(k - 1, 0);
            if toeplitz_ok && monotone_ok {
                sigma.push(cand);
                used[cand] = true;
                if extend(a, tol, half, sigma, used) {
                    return true;
                }
                sigma.pop();
                used[cand] = false;
            }
        }
        false
    }

    extend(a, tol, half, &mut sigma, &mut used).then(|| Numbering::from_vec_unchecked(sigma))
}

/// Finds `sigma_2` making `A[sigma_2(i)][sigma_2(j)]` benevolent. Cyclic
/// relabelings are tried first; the pruned exhaustive search only runs
/// when `M <= cap`.
pub fn find_benevolent_permutation(a: &DMatrix<f64>, tol: f64, cap: usize) -> Option<Numbering> {
    let m = a.nrows();
    if !is_symmetric(a, tol) {
        return None;
    }
    if let Some(s) = cyclic_candidates(m)
        .into_iter()
        .find(|s| is_benevolent(&conjugate(a, s), tol).is_benevolent())
    {
        return Some(s);
    }
    if m <= cap {
        search_benevolent(a, tol)
    } else {
        None
    }
}

/// Benevolence report for `a` in its given labeling, with the witness
/// filled in from [`find_benevolent_permutation`].
pub fn detect_benevolence(a: &DMatrix<f64>, tol: f64, cap: usize) -> BenevolenceReport {
    let mut report = is_benevolent(a, tol);
    if report.witness_permutation.is_none() {
        report.witness_permutation = find_benevolent_permutation(a, tol, cap);
    }
    report
}

/// Zig-zag numbering, defined through its inverse:
/// `n^-1(m) = 2m - 1` for `m <= ceil(M/2)`, else `2(M + 1 - m)`.
pub fn zigzag_numbering(m: usize) -> Numbering {
    let upper = m.div_ceil(2);
    let inverse: Vec<usize> = (1..=m)
        .map(|k| if k <= upper { 2 * k - 1 } else { 2 * (m + 1 - k) })
        .map(|x| x - 1)
        .collect();
    Numbering::from_vec_unchecked(inverse).invert()
}

/// Closed-form QAP solution `n* = sigma_2 ∘ n_zigzag ∘ sigma_1^-1`, or
/// `None` when `-bloch_gram` has no benevolent relabeling.
pub fn benevolent_solve(
    c: &CostFunction,
    bloch_gram: &DMatrix<f64>,
    tol: f64,
    cap: usize,
) -> Result<Option<(Numbering, f64)>> {
    if !c.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let m = c.len();
    if bloch_gram.nrows() != m {
        return Err(Error::Size { expected: m, got: bloch_gram.nrows() });
    }
    let Some(sigma2) = find_benevolent_permutation(&-bloch_gram, tol, cap) else {
        return Ok(None);
    };
    let sigma1 = c.sorting_permutation();
    let n_star = sigma2.compose(&zigzag_numbering(m))?.compose(&sigma1.invert())?;
    let inst = QapInstance::new(cost_gram(c, 0.0), bloch_gram.clone())?;
    let value = qap_objective(&inst, &n_star)?;
    Ok(Some((n_star, value)))
}

/// Best-improvement pairwise-swap descent from `start`. Used only to
/// produce a candidate when neither exact route is available.
pub fn swap_local_search(inst: &QapInstance, start: &Numbering) -> (Numbering, f64) {
    let mut perm = start.as_slice().to_vec();
    let mut value = inst.objective_raw(&perm);
    loop {
        let mut best = (value, None);
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                perm.swap(i, j);
                let v = inst.objective_raw(&perm);
                perm.swap(i, j);
                if v > best.0 + TIE_TOL * best.0.abs().max(1.0) {
                    best = (v, Some((i, j)));
                }
            }
        }
        match best.1 {
            Some((i, j)) => {
                perm.swap(i, j);
                value = best.0;
            }
            None => return (Numbering::from_vec_unchecked(perm), value),
        }
    }
}
