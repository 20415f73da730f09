//! Monte Carlo simulation of the single-measurement guessing strategy.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::costs::CostFunction;
use crate::ensembles::Ensemble;
use crate::error::{Error, Result};
use crate::measurement::NumberingMeasurement;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulationResult {
    pub estimate: f64,
    /// `None` below two samples.
    pub std_error: Option<f64>,
    pub samples: u64,
}

/// Draws `m0` with probability `Tr[rho(m0)]`, then an outcome `n` with
/// probability `Tr[pi(n) rho(m0)] / Tr[rho(m0)]`, and records the cost
/// `gamma(n^-1(m0))`.
pub fn simulate(
    e: &Ensemble,
    c: &CostFunction,
    m: &NumberingMeasurement,
    samples: u64,
    seed: u64,
) -> Result<SimulationResult> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if e.len() != c.len() {
        return Err(Error::Size { expected: e.len(), got: c.len() });
    }
    if m.dim() != e.dim() {
        return Err(Error::Dimension { expected: e.dim(), got: m.dim() });
    }
    if m.labels() != e.len() {
        return Err(Error::Size { expected: e.len(), got: m.labels() });
    }
    // costs[k][label]: cost paid under outcome k when `label` is true
    let costs = m.elements().map(|(n, _)| n.invert().pull_back(c.values())).collect::<Result<Vec<_>>>()?;
    let label_dist = WeightedIndex::new(e.prior()).map_err(|err| Error::Numerical(err.to_string()))?;
    let outcome_dists = (0..e.len())
        .map(|label| {
            let weights: Vec<f64> = m.elements().map(|(_, op)| op.trace_product(e.state(label)).max(0.0)).collect();
            match WeightedIndex::new(&weights) {
                Ok(d) => Ok(Some(d)),
                // labels with zero prior are never drawn
                Err(_) if e.prior()[label] == 0.0 => Ok(None),
                Err(err) => Err(Error::Numerical(err.to_string())),
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut mean, mut m2) = (0.0f64, 0.0f64);
    for k in 1..=samples {
        let label = label_dist.sample(&mut rng);
        let dist = outcome_dists[label].as_ref().expect("drawn labels have positive weight");
        let cost = costs[dist.sample(&mut rng)][label];
        let delta = cost - mean;
        mean += delta / k as f64;
        m2 += delta * (cost - mean);
    }
    let std_error = (samples >= 2).then(|| (m2 / (samples - 1) as f64 / samples as f64).sqrt());
    Ok(SimulationResult { estimate: mean, std_error, samples })
}
