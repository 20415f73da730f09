//! Cost functions over query positions, balancedness certificates and the
//! rank-one cost Gram matrix.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::numbering::Numbering;

/// Default tolerance for the multiset comparison behind balancedness.
pub const BALANCE_TOL: f64 = 1e-10;

/// `gamma(t)` is the cost paid when the `t`-th query is the correct one.
#[derive(Clone, Debug, PartialEq)]
pub struct CostFunction {
    values: Vec<f64>,
    mean: f64,
    balancing: Option<Numbering>,
    sorting: Numbering,
}

impl CostFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        Self::with_tolerance(values, BALANCE_TOL)
    }

    pub fn with_tolerance(values: Vec<f64>, tol: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("cost function needs at least one value".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("cost values must be finite".into()));
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let balancing = balance_certificate(&values, tol);
        let sorting = Numbering::from_vec_unchecked(ascending_order(&values));
        Ok(Self { values, mean, balancing, sorting })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, t: usize) -> f64 {
        self.values[t]
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `sigma_gamma`, present iff the cost is balanced.
    pub fn balancing_permutation(&self) -> Option<&Numbering> {
        self.balancing.as_ref()
    }

    pub fn is_balanced(&self) -> bool {
        self.balancing.is_some()
    }

    /// `sigma_1` with `gamma ∘ sigma_1` non-decreasing.
    pub fn sorting_permutation(&self) -> &Numbering {
        &self.sorting
    }

    /// Centered coefficients `gamma(t) - mean`.
    pub fn centered(&self) -> Vec<f64> {
        self.values.iter().map(|v| v - self.mean).collect()
    }

    /// `gamma ∘ sigma`.
    pub fn permuted(&self, sigma: &Numbering) -> Result<Self> {
        Self::new(sigma.pull_back(&self.values)?)
    }

    /// Smallest shift `k` making `gamma - mean + k` non-negative.
    pub fn default_shift(&self) -> f64 {
        self.mean - self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Random balanced cost: values come in pairs `mu ± d` (plus `mu` when
    /// `m` is odd) in shuffled positions.
    pub fn random_balanced<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mu: f64 = rng.random_range(-2.0..4.0);
        let mut values = Vec::with_capacity(m);
        for _ in 0..m / 2 {
            let d: f64 = rng.random_range(0.0..3.0);
            values.push(mu + d);
            values.push(mu - d);
        }
        if m % 2 == 1 {
            values.push(mu);
        }
        values.shuffle(rng);
        Self::new(values).expect("random balanced cost is finite")
    }
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// Finds `sigma_gamma` with `gamma(sigma_gamma^-1(t)) = 2 mean - gamma(t)`.
///
/// The `k`-th smallest value is matched with the `k`-th largest; the cost
/// is balanced iff every matched pair sums to `2 mean` within `tol`.
pub fn balance_certificate(values: &[f64], tol: f64) -> Option<Numbering> {
    let m = values.len();
    if m == 0 {
        return None;
    }
    let mean = values.iter().sum::<f64>() / m as f64;
    let order = ascending_order(values);
    let mut inverse = vec![0; m];
    for k in 0..m {
        let (lo, hi) = (order[k], order[m - 1 - k]);
        if (values[lo] + values[hi] - 2.0 * mean).abs() > 2.0 * tol {
            return None;
        }
        inverse[lo] = hi;
    }
    Some(Numbering::from_vec_unchecked(inverse).invert())
}

/// `gamma(t) = t` for `t = 1..=m`, balanced by the reversal.
pub fn identity_cost(m: usize) -> Result<CostFunction> {
    CostFunction::new((1..=m).map(|t| t as f64).collect())
}

/// Rank-one Gram matrix `G_ij = (gamma(i) - mean + shift)(gamma(j) - mean + shift)`.
pub fn cost_gram(c: &CostFunction, shift: f64) -> DMatrix<f64> {
    let f: Vec<f64> = c.centered().iter().map(|x| x + shift).collect();
    DMatrix::from_fn(f.len(), f.len(), |i, j| f[i] * f[j])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_balanced(values: &[f64], sigma: &Numbering, tol: f64) {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let inv = sigma.invert();
        for t in 0..values.len() {
            assert!(((values[t] + values[inv.apply(t)]) / 2.0 - mean).abs() <= tol);
        }
    }

    #[test]
    fn identity_cost_is_balanced_by_reversal() {
        let sigma = balance_certificate(&[1.0, 2.0, 3.0, 4.0], BALANCE_TOL).unwrap();
        assert_eq!(sigma.to_one_based(), vec![4, 3, 2, 1]);
        let c = identity_cost(4).unwrap();
        assert_eq!(c.mean(), 2.5);
        assert_eq!(c.balancing_permutation().unwrap(), &Numbering::reversal(4));
    }

    #[test]
    fn identity_cost_small_sizes() {
        let c = identity_cost(2).unwrap();
        assert_eq!(c.values(), &[1.0, 2.0]);
        assert_eq!(c.mean(), 1.5);
        let c = identity_cost(1).unwrap();
        assert!(c.balancing_permutation().unwrap().is_identity());
    }

    #[test]
    fn two_level_cost_is_balanced() {
        let values = [0.0, 0.0, 1.0, 1.0];
        let sigma = balance_certificate(&values, BALANCE_TOL).unwrap();
        check_balanced(&values, &sigma, 1e-12);
    }

    #[test]
    fn skewed_cost_is_not_balanced() {
        assert!(balance_certificate(&[0.0, 1.0, 3.0], BALANCE_TOL).is_none());
        assert!(!CostFunction::new(vec![0.0, 1.0, 3.0]).unwrap().is_balanced());
    }

    #[test]
    fn cost_gram_examples() {
        let g = cost_gram(&identity_cost(2).unwrap(), 0.0);
        assert_eq!(g, DMatrix::from_row_slice(2, 2, &[0.25, -0.25, -0.25, 0.25]));
        let g = cost_gram(&CostFunction::new(vec![3.0; 4]).unwrap(), 0.0);
        assert!(g.iter().all(|&x| x == 0.0));
        let g = cost_gram(&identity_cost(3).unwrap(), 1.0);
        assert_eq!((g[(0, 0)], g[(2, 2)], g[(0, 2)]), (0.0, 4.0, 0.0));
    }

    #[test]
    fn default_shift_makes_coefficients_non_negative() {
        let c = CostFunction::new(vec![3.0, -1.0, 5.0, 1.0]).unwrap();
        assert_eq!(c.default_shift(), 3.0);
        assert!(c.centered().iter().all(|x| x + c.default_shift() >= 0.0));
    }

    #[test]
    fn sorting_permutation_sorts() {
        let c = CostFunction::new(vec![3.0, 1.0, 2.0, 1.0]).unwrap();
        let sorted = c.sorting_permutation().pull_back(c.values()).unwrap();
        assert_eq!(sorted, vec![1.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn random_balanced_costs_certify() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for m in 1..8 {
            let c = CostFunction::random_balanced(m, &mut rng);
            check_balanced(c.values(), c.balancing_permutation().unwrap(), 1e-10);
        }
    }

    proptest! {
        #[test]
        fn certificate_satisfies_balance_pointwise(
            pairs in proptest::collection::vec(0.0f64..10.0, 0..5),
            mu in -5.0f64..5.0,
            odd in any::<bool>(),
            seed in any::<u64>(),
        ) {
            let mut values: Vec<f64> = pairs.iter().flat_map(|d| [mu + d, mu - d]).collect();
            if odd || values.is_empty() {
                values.push(mu);
            }
            values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let sigma = balance_certificate(&values, BALANCE_TOL);
            prop_assert!(sigma.is_some());
            check_balanced(&values, &sigma.unwrap(), 1e-9);
        }

        #[test]
        fn balancedness_is_permutation_invariant(
            values in proptest::collection::vec(-3i32..3, 1..7),
            seed in any::<u64>(),
        ) {
            let values: Vec<f64> = values.into_iter().map(f64::from).collect();
            let sigma = Numbering::random(values.len(), &mut ChaCha8Rng::seed_from_u64(seed));
            let permuted = sigma.pull_back(&values).unwrap();
            prop_assert_eq!(
                balance_certificate(&values, BALANCE_TOL).is_some(),
                balance_certificate(&permuted, BALANCE_TOL).is_some()
            );
        }

        #[test]
        fn cost_gram_is_psd_rank_one_and_monotone(values in proptest::collection::vec(-5.0f64..5.0, 1..7)) {
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            let c = CostFunction::new(sorted).unwrap();
            let g = cost_gram(&c, 0.0);
            let ev = nalgebra::SymmetricEigen::new(g.clone()).eigenvalues;
            prop_assert!(ev.iter().all(|&l| l >= -1e-9));
            prop_assert!(ev.iter().filter(|l| l.abs() > 1e-9).count() <= 1);
            let shifted = cost_gram(&c, c.default_shift());
            let n = c.len();
            for i in 0..n {
                for j in 0..n {
                    if j + 1 < n { prop_assert!(shifted[(i, j)] <= shifted[(i, j + 1)] + 1e-12); }
                    if i + 1 < n { prop_assert!(shifted[(i, j)] <= shifted[(i + 1, j)] + 1e-12); }
                }
            }
        }
    }
}
