//! Ensembles of sub-normalized states and the generators for the
//! polygon / anti-prism, SIC, MUB and random families.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numbering::Numbering;
use crate::operators::{BlochVector, HermitianOperator, EIGEN_TOL};

/// A validated ensemble `m -> rho(m)` with unit total trace.
#[derive(Clone, Debug)]
pub struct Ensemble {
    dim: usize,
    states: Vec<HermitianOperator>,
    prior: Vec<f64>,
    average: HermitianOperator,
    bloch: Option<Vec<BlochVector>>,
}

impl Ensemble {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of labels `M`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[HermitianOperator] {
        &self.states
    }

    pub fn state(&self, m: usize) -> &HermitianOperator {
        &self.states[m]
    }

    /// `prior[m] = Tr[rho(m)]`.
    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    /// Mean of the states list, `(1/M) sum_m rho(m)`.
    pub fn average_state(&self) -> &HermitianOperator {
        &self.average
    }

    /// Pauli vectors of the states; `None` unless `dim == 2`.
    pub fn bloch(&self) -> Option<&[BlochVector]> {
        self.bloch.as_deref()
    }

    pub fn bloch_vectors(&self) -> Result<&[BlochVector]> {
        self.bloch().ok_or(Error::Dimension { expected: 2, got: self.dim })
    }

    /// `rho ∘ sigma`, i.e. the state at label `m` becomes `rho(sigma(m))`.
    pub fn permuted(&self, sigma: &Numbering) -> Result<Self> {
        validate(sigma.pull_back(&self.states)?)
    }
}

/// Checks PSD-ness and normalization and fills the caches.
pub fn validate(raw_states: Vec<HermitianOperator>) -> Result<Ensemble> {
    validate_with_tolerance(raw_states, EIGEN_TOL)
}

pub fn validate_with_tolerance(raw_states: Vec<HermitianOperator>, tol: f64) -> Result<Ensemble> {
    let first = raw_states.first().ok_or(Error::Empty)?;
    let dim = first.dim();
    if let Some(bad) = raw_states.iter().find(|s| s.dim() != dim) {
        return Err(Error::Dimension { expected: dim, got: bad.dim() });
    }
    for (index, s) in raw_states.iter().enumerate() {
        let min_eigenvalue = s.min_eigenvalue();
        if min_eigenvalue < -tol {
            return Err(Error::NotPsd { index, min_eigenvalue });
        }
    }
    let prior: Vec<f64> = raw_states.iter().map(HermitianOperator::trace).collect();
    let total: f64 = prior.iter().sum();
    if (total - 1.0).abs() > tol {
        return Err(Error::Trace(total));
    }
    let m = raw_states.len();
    let average = raw_states
        .iter()
        .fold(HermitianOperator::zeros(dim), |acc, s| &acc + s)
        .scale(1.0 / m as f64);
    let bloch = if dim == 2 {
        Some(raw_states.iter().map(|s| s.pauli_vector()).collect::<Result<Vec<_>>>()?)
    } else {
        None
    };
    Ok(Ensemble { dim, states: raw_states, prior, average, bloch })
}

/// Qubit ensemble from `(trace, bloch)` pairs.
pub fn from_bloch_states(states: &[(f64, BlochVector)]) -> Result<Ensemble> {
    validate(states.iter().map(|&(t, v)| HermitianOperator::from_bloch(t, v)).collect())
}

/// Bloch radius scale of the polygon / anti-prism family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lambda {
    /// `1 / (M sqrt(1 + h^2))`, the largest radius keeping states PSD.
    Pure,
    Value(f64),
}

impl Serialize for Lambda {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Lambda::Pure => s.serialize_str("pure"),
            Lambda::Value(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for Lambda {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Lambda::Value(v)),
            Raw::Str(s) if s == "pure" => Ok(Lambda::Pure),
            Raw::Str(s) => s.parse().map(Lambda::Value).map_err(|_| {
                serde::de::Error::custom(format!("lambda must be \"pure\" or a number, got {s:?}"))
            }),
        }
    }
}

impl std::str::FromStr for Lambda {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "pure" {
            return Ok(Lambda::Pure);
        }
        s.parse()
            .map(Lambda::Value)
            .map_err(|_| Error::Family(format!("lambda must be \"pure\" or a number, got {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PolygonAntiprism,
    Sic,
    Mub,
    Random,
}

/// Generator input, mirroring the `{"family": ..., "M": ...}` JSON form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleFamilySpec {
    pub family: Family,
    #[serde(rename = "M", default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub h: f64,
    #[serde(default = "default_lambda")]
    pub lambda: Lambda,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

fn default_lambda() -> Lambda {
    Lambda::Pure
}

fn default_dim() -> usize {
    2
}

impl EnsembleFamilySpec {
    pub fn polygon_antiprism(m: usize, h: f64, lambda: Lambda) -> Self {
        Self { family: Family::PolygonAntiprism, m: Some(m), h, lambda, seed: 0, dim: 2 }
    }

    pub fn generate(&self) -> Result<Ensemble> {
        let need_m = || self.m.ok_or_else(|| Error::Family("missing M".into()));
        match self.family {
            Family::PolygonAntiprism => generate_polygon_antiprism(need_m()?, self.h, self.lambda),
            Family::Sic => generate_sic(),
            Family::Mub => generate_mub(),
            Family::Random => generate_random_uniform_prior(need_m()?, self.dim, self.seed),
        }
    }
}

/// Largest anti-prism height for which the benevolence argument applies:
/// `0` for odd `M`, `sqrt((1 - cos(2pi/M))/2)` when `M/2` is even and
/// `sqrt((cos(2pi/M) - cos(4pi/M))/2)` when `M/2` is odd.
pub fn antiprism_h_bound(m: usize) -> f64 {
    let theta = 2.0 * PI / m as f64;
    if m % 2 == 1 {
        0.0
    } else if (m / 2).is_multiple_of(2) {
        ((1.0 - theta.cos()) / 2.0).sqrt()
    } else {
        ((theta.cos() - (2.0 * theta).cos()) / 2.0).max(0.0).sqrt()
    }
}

/// Bloch vector of label `k` (zero-based) in the polygon / anti-prism
/// family: `lambda (cos(2 pi k/M), sin(2 pi k/M), (-1)^k h)`.
pub fn antiprism_bloch(m: usize, k: usize, h: f64, lambda: f64) -> BlochVector {
    let phi = 2.0 * PI * k as f64 / m as f64;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    BlochVector::new(lambda * phi.cos(), lambda * phi.sin(), lambda * sign * h)
}

pub fn generate_polygon_antiprism(m: usize, h: f64, lambda: Lambda) -> Result<Ensemble> {
    if m < 2 {
        return Err(Error::Family(format!("M must be at least 2, got {m}")));
    }
    if !(h >= 0.0 && h.is_finite()) {
        return Err(Error::Family(format!("h must be a non-negative number, got {h}")));
    }
    if m % 2 == 1 && h > 0.0 {
        return Err(Error::Family(format!(
            "h = {h} requires an even M; the h-bound for odd M = {m} is 0"
        )));
    }
    let radius = (1.0 + h * h).sqrt();
    let lambda = match lambda {
        Lambda::Pure => 1.0 / (m as f64 * radius),
        Lambda::Value(l) if l > 0.0 && l.is_finite() => l,
        Lambda::Value(l) => return Err(Error::Family(format!("lambda must be positive, got {l}"))),
    };
    let trace = 1.0 / m as f64;
    if lambda * radius > trace * (1.0 + 1e-12) {
        return Err(Error::Family(format!(
            "lambda * sqrt(1 + h^2) = {} exceeds 1/M = {trace}; states would not be PSD",
            lambda * radius
        )));
    }
    let states: Vec<(f64, BlochVector)> = (0..m).map(|k| (trace, antiprism_bloch(m, k, h, lambda))).collect();
    from_bloch_states(&states)
}

/// Tetrahedral (SIC) qubit ensemble: anti-prism with `M = 4` at the h-bound.
pub fn generate_sic() -> Result<Ensemble> {
    generate_polygon_antiprism(4, antiprism_h_bound(4), Lambda::Pure)
}

/// Octahedral (MUB) qubit ensemble: anti-prism with `M = 6` at the h-bound.
pub fn generate_mub() -> Result<Ensemble> {
    generate_polygon_antiprism(6, antiprism_h_bound(6), Lambda::Pure)
}

/// Random ensemble with uniform prior, reproducible from `seed`.
///
/// Qubits: direction uniform on the sphere (`z ~ U[-1,1)`, `phi ~ U[0,2pi)`)
/// and Bloch radius `~ U[0, 1/M]`. Higher dimensions: normalized Wishart
/// matrices `X X^dagger` with complex Gaussian `X`.
pub fn generate_random_uniform_prior(m: usize, dim: usize, seed: u64) -> Result<Ensemble> {
    if m < 2 || dim < 2 {
        return Err(Error::Family(format!("random family needs M >= 2 and dim >= 2, got M={m}, dim={dim}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trace = 1.0 / m as f64;
    let states = (0..m)
        .map(|_| {
            if dim == 2 {
                let z: f64 = rng.random_range(-1.0..1.0);
                let phi: f64 = rng.random_range(0.0..2.0 * PI);
                let r: f64 = rng.random_range(0.0..=trace);
                let s = (1.0 - z * z).sqrt();
                HermitianOperator::from_bloch(trace, BlochVector::new(s * phi.cos(), s * phi.sin(), z).scale(r))
            } else {
                let x = DMatrix::from_fn(dim, dim, |_, _| {
                    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                });
                let w = HermitianOperator::from_matrix_unchecked(&x * x.adjoint());
                w.scale(trace / w.trace())
            }
        })
        .collect();
    validate(states)
}

/// True iff every prior probability is within `tol` of `1/M`.
pub fn is_uniform_prior(e: &Ensemble, tol: f64) -> bool {
    let u = 1.0 / e.len() as f64;
    e.prior().iter().all(|p| (p - u).abs() <= tol)
}

/// True iff `v(avg) . v(rho(m))` is the same for every `m`.
pub fn constant_overlap_check(e: &Ensemble, tol: f64) -> Result<bool> {
    let bloch = e.bloch_vectors()?;
    let center = e.average_state().pauli_vector()?;
    let dots: Vec<f64> = bloch.iter().map(|v| center.dot(v)).collect();
    let mean = dots.iter().sum::<f64>() / dots.len() as f64;
    Ok(dots.iter().all(|d| (d - mean).abs() <= tol))
}

/// Parameters recovered from an ensemble laid out exactly like
/// [`generate_polygon_antiprism`] output.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AntiprismMatch {
    pub m: usize,
    pub h: f64,
    pub lambda: f64,
}

/// Recognizes polygon / anti-prism ensembles in the canonical labeling
/// (optionally reflected through the equatorial plane).
pub fn recognize_antiprism(e: &Ensemble, tol: f64) -> Option<AntiprismMatch> {
    let bloch = e.bloch()?;
    let m = e.len();
    if m < 2 || !is_uniform_prior(e, tol) {
        return None;
    }
    let v0 = bloch[0].0;
    let lambda = v0[0];
    if lambda <= tol || v0[1].abs() > tol {
        return None;
    }
    let signed_h = v0[2] / lambda;
    let h = signed_h.abs();
    if m % 2 == 1 && h > tol {
        return None;
    }
    let fits = bloch.iter().enumerate().all(|(k, v)| {
        let mut expected = antiprism_bloch(m, k, h, lambda);
        if signed_h < 0.0 {
            expected.0[2] = -expected.0[2];
        }
        expected.0.iter().zip(&v.0).all(|(a, b)| (a - b).abs() <= tol)
    });
    fits.then_some(AntiprismMatch { m, h, lambda })
}
