#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use quantum_guesswork::costs::CostFunction;
use quantum_guesswork::ensembles::generate_random_uniform_prior;
use quantum_guesswork::{Ensemble, HermitianOperator};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Heap's algorithm; visits every permutation of `0..m` once.
pub fn for_each_permutation(m: usize, mut f: impl FnMut(&[usize])) {
    let mut a: Vec<usize> = (0..m).collect();
    let mut c = vec![0usize; m];
    f(&a);
    let mut i = 1;
    while i < m {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Minimum guesswork of a uniform-prior qubit ensemble from raw Bloch
/// vectors: `mean - max_n |2 sum_t (gamma(t) - mean) v(n(t))| / 2`.
pub fn oracle_qubit(bloch: &[[f64; 3]], gamma: &[f64]) -> f64 {
    let mean = gamma.iter().sum::<f64>() / gamma.len() as f64;
    let mut best = 0.0f64;
    for_each_permutation(bloch.len(), |n| {
        let mut w = [0.0; 3];
        for (t, &label) in n.iter().enumerate() {
            for k in 0..3 {
                w[k] += 2.0 * (gamma[t] - mean) * bloch[label][k];
            }
        }
        best = best.max((w[0] * w[0] + w[1] * w[1] + w[2] * w[2]).sqrt());
    });
    mean - best / 2.0
}

/// Largest trace norm of `E(n)` over all numberings, via singular values.
pub fn oracle_max_trace_norm(states: &[DMatrix<Complex64>], gamma: &[f64]) -> f64 {
    let mean = gamma.iter().sum::<f64>() / gamma.len() as f64;
    let d = states[0].nrows();
    let mut best = 0.0f64;
    for_each_permutation(states.len(), |n| {
        let mut e = DMatrix::<Complex64>::zeros(d, d);
        for (t, &label) in n.iter().enumerate() {
            e += &states[label] * Complex64::new(2.0 * (gamma[t] - mean), 0.0);
        }
        best = best.max(e.singular_values().sum());
    });
    best
}

pub fn raw_states(e: &Ensemble) -> Vec<DMatrix<Complex64>> {
    e.states().iter().map(|s| s.matrix().clone()).collect()
}

/// Trine, SIC and MUB Bloch vectors written out by hand.
pub fn trine_bloch() -> Vec<[f64; 3]> {
    let s = 3f64.sqrt() / 2.0;
    [[1.0, 0.0], [-0.5, s], [-0.5, -s]].iter().map(|&[x, y]| [x / 3.0, y / 3.0, 0.0]).collect()
}

pub fn sic_bloch() -> Vec<[f64; 3]> {
    let r = 1.0 / (4.0 * 3f64.sqrt());
    [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]]
        .iter()
        .map(|v| [v[0] * r, v[1] * r, v[2] * r])
        .collect()
}

pub fn mub_bloch() -> Vec<[f64; 3]> {
    let r = 1.0 / 6.0;
    vec![[r, 0.0, 0.0], [-r, 0.0, 0.0], [0.0, r, 0.0], [0.0, -r, 0.0], [0.0, 0.0, r], [0.0, 0.0, -r]]
}

pub fn bloch_of(e: &Ensemble) -> Vec<[f64; 3]> {
    e.bloch().expect("qubit ensemble").iter().map(|v| v.0).collect()
}

pub struct Instance {
    pub ensemble: Ensemble,
    pub cost: CostFunction,
    pub seed: u64,
}

/// Random uniform-prior ensembles with random balanced costs. Sizes cycle
/// through `sizes`; the same seed always gives the same instance.
pub fn random_suite(count: usize, dim: usize, sizes: &[usize], base_seed: u64) -> Vec<Instance> {
    (0..count)
        .map(|i| {
            let seed = base_seed + i as u64;
            let m = sizes[i % sizes.len()];
            let ensemble = generate_random_uniform_prior(m, dim, seed).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let cost = CostFunction::random_balanced(m, &mut rng);
            Instance { ensemble, cost, seed }
        })
        .collect()
}

/// Embeds each qubit state as the top-left block of a `3 x 3` matrix.
pub fn embed_in_qutrit(e: &Ensemble) -> Vec<HermitianOperator> {
    e.states()
        .iter()
        .map(|s| {
            let rows: Vec<Vec<(f64, f64)>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| if i < 2 && j < 2 { (s.entry(i, j).re, s.entry(i, j).im) } else { (0.0, 0.0) })
                        .collect()
                })
                .collect();
            HermitianOperator::from_rows(&rows).unwrap()
        })
        .collect()
}
