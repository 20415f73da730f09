//! Effective operators, guesswork evaluation and the minimum-guesswork
//! solvers.
//!
//! For a balanced cost `gamma` the effective operator of a numbering is
//! `E(n) = 2 sum_t (gamma(t) - mean) rho(n(t))`, and whenever some `n*`
//! satisfies `|E(n*)| >= E(n)` for every `n`, the two-outcome measurement
//! built from the negative and null spectral parts of `E(n*)` attains the
//! minimum guesswork `mean - ||E(n*)||_1 / 2`. For qubits with a uniform
//! prior that condition always holds at the maximizer of a quadratic
//! assignment problem (see [`crate::qap`]).

use rand::Rng;

use crate::costs::CostFunction;
use crate::ensembles::{constant_overlap_check, is_uniform_prior, Ensemble};
use crate::enumerate::{par_all, par_filter, par_max};
use crate::error::{Error, Result};
use crate::measurement::NumberingMeasurement;
use crate::numbering::Numbering;
use crate::operators::{HermitianOperator, EIGEN_TOL};
use crate::qap::{
    benevolent_solve, bloch_gram, brute_force_solve, detect_benevolence, qap_objective, swap_local_search,
    zigzag_numbering, BenevolenceReport, QapInstance, BENEVOLENCE_TOL, DEFAULT_FACTORIAL_CAP,
};

/// Agreement required between independently computed guesswork values.
pub const VALUE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Auto,
    Brute,
    Benevolent,
}

impl std::str::FromStr for SolveMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "brute" => Ok(Self::Brute),
            "benevolent" => Ok(Self::Benevolent),
            _ => Err(Error::InvalidArgument(format!("unknown method {s:?} (auto|brute|benevolent)"))),
        }
    }
}

/// Which route produced the reported numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    Benevolent,
    ConditionCheckOnly,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::BruteForce => "brute_force",
            Method::Benevolent => "benevolent",
            Method::ConditionCheckOnly => "condition_check_only",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub factorial_cap: usize,
    pub eigen_tol: f64,
    pub benevolence_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { factorial_cap: DEFAULT_FACTORIAL_CAP, eigen_tol: EIGEN_TOL, benevolence_tol: BENEVOLENCE_TOL }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GuessworkReport {
    pub value: f64,
    pub optimal_numbering: Numbering,
    pub measurement: NumberingMeasurement,
    pub method: Method,
    pub condition_verified: bool,
    pub mean_cost: f64,
    pub trace_norm_term: f64,
    pub diagnostics: Option<BenevolenceReport>,
}

fn check_sizes(e: &Ensemble, c: &CostFunction) -> Result<()> {
    if e.len() != c.len() {
        return Err(Error::Size { expected: e.len(), got: c.len() });
    }
    Ok(())
}

fn effective_raw(e: &Ensemble, centered: &[f64], n: &[usize]) -> HermitianOperator {
    n.iter()
        .zip(centered)
        .fold(HermitianOperator::zeros(e.dim()), |acc, (&label, &w)| &acc + &e.state(label).scale(2.0 * w))
}

/// `E(n) = 2 sum_t (gamma(t) - mean) rho(n(t))`.
pub fn effective_operator(e: &Ensemble, c: &CostFunction, n: &Numbering) -> Result<HermitianOperator> {
    check_sizes(e, c)?;
    if n.len() != e.len() {
        return Err(Error::Size { expected: e.len(), got: n.len() });
    }
    Ok(effective_raw(e, &c.centered(), n.as_slice()))
}

/// `q(t) = sum_n Tr[pi(n) rho(n(t))]`, the probability that the `t`-th
/// query is the first correct one.
pub fn success_distribution(e: &Ensemble, m: &NumberingMeasurement) -> Result<Vec<f64>> {
    if m.dim() != e.dim() {
        return Err(Error::Dimension { expected: e.dim(), got: m.dim() });
    }
    if m.labels() != e.len() {
        return Err(Error::Size { expected: e.len(), got: m.labels() });
    }
    let mut q = vec![0.0; e.len()];
    for (n, op) in m.elements() {
        for (t, slot) in q.iter_mut().enumerate() {
            *slot += op.trace_product(e.state(n.apply(t)));
        }
    }
    Ok(q)
}

/// `mean + (1/2) sum_n Tr[pi(n) E(n)]`, the discrimination form of the
/// guesswork.
pub fn guesswork_via_effective(e: &Ensemble, c: &CostFunction, m: &NumberingMeasurement) -> Result<f64> {
    check_sizes(e, c)?;
    let centered = c.centered();
    let mut acc = 0.0;
    for (n, op) in m.elements() {
        acc += op.trace_product(&effective_raw(e, &centered, n.as_slice()));
    }
    Ok(c.mean() + 0.5 * acc)
}

/// Expected cost `sum_t gamma(t) q(t)`, cross-checked against
/// [`guesswork_via_effective`].
pub fn guesswork_value(e: &Ensemble, c: &CostFunction, m: &NumberingMeasurement) -> Result<f64> {
    check_sizes(e, c)?;
    let q = success_distribution(e, m)?;
    let direct: f64 = q.iter().zip(c.values()).map(|(p, g)| p * g).sum();
    let other = guesswork_via_effective(e, c, m)?;
    let scale = c.values().iter().fold(1.0f64, |a, g| a.max(g.abs()));
    if (direct - other).abs() > 1e-10 * scale {
        return Err(Error::Numerical(format!("guesswork forms disagree: {direct} vs {other}")));
    }
    Ok(direct)
}

/// `n* -> Pi_-(E(n*)) + Pi_0(E(n*))/2` and the same for `n* ∘ sigma_gamma`.
pub fn optimal_two_outcome_measurement(
    e: &Ensemble,
    c: &CostFunction,
    n_star: &Numbering,
) -> Result<NumberingMeasurement> {
    let sigma = c.balancing_permutation().ok_or(Error::NotBalanced)?;
    let partner = n_star.compose(sigma)?;
    if &partner == n_star {
        return Ok(NumberingMeasurement::single_outcome(e.dim(), n_star.clone()));
    }
    let element = |n: &Numbering| -> Result<HermitianOperator> {
        let sp = effective_operator(e, c, n)?.spectral_parts(EIGEN_TOL);
        Ok(&sp.negative_projector + &sp.null_projector.scale(0.5))
    };
    NumberingMeasurement::new(e.dim(), [(n_star.clone(), element(n_star)?), (partner.clone(), element(&partner)?)])
}

/// Random feasible two-outcome measurement on `{n, n ∘ sigma_gamma}` for a
/// random `n`, built from the spectral parts of a random traceless operator.
pub fn random_two_outcome_measurement<R: Rng + ?Sized>(
    dim: usize,
    c: &CostFunction,
    rng: &mut R,
) -> Result<NumberingMeasurement> {
    let sigma = c.balancing_permutation().ok_or(Error::NotBalanced)?;
    let n = Numbering::random(c.len(), rng);
    let partner = n.compose(sigma)?;
    if partner == n {
        return Ok(NumberingMeasurement::single_outcome(dim, n));
    }
    let a = HermitianOperator::random(dim, rng);
    let a = &a - &HermitianOperator::identity(dim).scale(a.trace() / dim as f64);
    let sp = a.spectral_parts(EIGEN_TOL);
    let half_null = sp.null_projector.scale(0.5);
    NumberingMeasurement::new(
        dim,
        [(n, &sp.negative_projector + &half_null), (partner, &sp.positive_projector + &half_null)],
    )
}

/// True iff `|E(n*)| - E(n)` is PSD within `tol` for all `M!` numberings.
pub fn condition_check(e: &Ensemble, c: &CostFunction, n_star: &Numbering, tol: f64, cap: usize) -> Result<bool> {
    if !c.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let m = e.len();
    if m > cap {
        return Err(Error::CapExceeded { m, cap });
    }
    let dominant = effective_operator(e, c, n_star)?.abs();
    let centered = c.centered();
    Ok(par_all(m, |p| (&dominant - &effective_raw(e, &centered, p)).min_eigenvalue() >= -tol))
}

/// `(rho ∘ sigma2, gamma ∘ sigma1)`.
pub fn permute_problem(
    e: &Ensemble,
    c: &CostFunction,
    sigma1: &Numbering,
    sigma2: &Numbering,
) -> Result<(Ensemble, CostFunction)> {
    check_sizes(e, c)?;
    Ok((e.permuted(sigma2)?, c.permuted(sigma1)?))
}

fn report_from_numbering(
    e: &Ensemble,
    c: &CostFunction,
    n_star: Numbering,
    method: Method,
    trace_norm: f64,
    condition_verified: bool,
    diagnostics: Option<BenevolenceReport>,
) -> Result<GuessworkReport> {
    let measurement = optimal_two_outcome_measurement(e, c, &n_star)?;
    let trace_norm_term = 0.5 * trace_norm;
    Ok(GuessworkReport {
        value: c.mean() - trace_norm_term,
        optimal_numbering: n_star,
        measurement,
        method,
        condition_verified,
        mean_cost: c.mean(),
        trace_norm_term,
        diagnostics,
    })
}

/// Minimum guesswork of a qubit ensemble with uniform prior.
///
/// `Auto` tries the benevolent fast path first (verifying it against brute
/// force when `M` is under the cap), then brute force, and beyond the cap
/// falls back to a local-search candidate reported as unverified.
pub fn min_guesswork_qubit(
    e: &Ensemble,
    c: &CostFunction,
    method: SolveMethod,
    config: &SolverConfig,
) -> Result<GuessworkReport> {
    check_sizes(e, c)?;
    if e.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: e.dim() });
    }
    if !is_uniform_prior(e, config.eigen_tol) {
        return Err(Error::NonUniformPrior);
    }
    if !c.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let m = e.len();
    let cap = config.factorial_cap;
    let inst = QapInstance::from_problem(e, c, 0.0)?;
    let gram = bloch_gram(e)?;

    let mut diagnostics = None;
    let mut fast = None;
    if method != SolveMethod::Brute {
        let overlap_ok = constant_overlap_check(e, config.benevolence_tol)?;
        let report = detect_benevolence(&-&gram, config.benevolence_tol, cap);
        if overlap_ok && report.witness_permutation.is_some() {
            fast = benevolent_solve(c, &gram, config.benevolence_tol, cap)?;
        }
        diagnostics = Some(report);
        if method == SolveMethod::Benevolent && fast.is_none() {
            let why = if overlap_ok {
                "-Gram(v∘rho) has no benevolent relabeling"
            } else {
                "v(avg) . v(rho(m)) is not constant"
            };
            return Err(Error::Unavailable(format!("benevolent fast path unavailable: {why}")));
        }
    }

    let (n_star, method_used) = match fast {
        Some((n, value)) => {
            if method == SolveMethod::Auto && m <= cap {
                let (_, brute) = brute_force_solve(&inst, cap)?;
                if (brute - value).abs() > VALUE_TOL {
                    return Err(Error::Numerical(format!(
                        "benevolent objective {value} disagrees with brute force {brute}"
                    )));
                }
            }
            (n, Method::Benevolent)
        }
        None if m <= cap => (brute_force_solve(&inst, cap)?.0, Method::BruteForce),
        None if method == SolveMethod::Brute => return Err(Error::CapExceeded { m, cap }),
        None => (swap_local_search(&inst, &zigzag_numbering(m)).0, Method::ConditionCheckOnly),
    };

    let objective = qap_objective(&inst, &n_star)?;
    let pauli_norm = effective_operator(e, c, &n_star)?.pauli_vector()?.norm();
    if (pauli_norm * pauli_norm - 4.0 * objective).abs() > VALUE_TOL {
        return Err(Error::Numerical("Pauli norm and QAP objective disagree".into()));
    }
    let condition_verified = if m <= cap {
        let ok = condition_check(e, c, &n_star, config.eigen_tol, cap)?;
        if !ok && method_used != Method::ConditionCheckOnly {
            return Err(Error::Numerical(format!("optimality condition fails at the QAP maximizer {n_star}")));
        }
        ok
    } else {
        false
    };
    report_from_numbering(e, c, n_star, method_used, pauli_norm, condition_verified, diagnostics)
}

/// Numberings within a relative `1e-9` of the largest trace norm of `E(n)`.
fn trace_norm_maximizers(e: &Ensemble, c: &CostFunction, limit: usize) -> Vec<Numbering> {
    let centered = c.centered();
    let score = |p: &[usize]| effective_raw(e, &centered, p).trace_norm();
    let best = par_max(e.len(), score);
    let threshold = best - VALUE_TOL * best.abs().max(1.0);
    par_filter(e.len(), |p| score(p) >= threshold, limit)
        .into_iter()
        .map(Numbering::from_vec_unchecked)
        .collect()
}

/// Any-dimension solver: returns a report only when the sufficient
/// optimality condition is verified at `candidate` (or, when absent, at
/// one of the trace-norm maximizers).
pub fn min_guesswork_general(
    e: &Ensemble,
    c: &CostFunction,
    candidate: Option<&Numbering>,
    config: &SolverConfig,
) -> Result<Option<GuessworkReport>> {
    check_sizes(e, c)?;
    if !c.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let m = e.len();
    let cap = config.factorial_cap;
    if m > cap {
        return Err(Error::CapExceeded { m, cap });
    }
    let candidates = match candidate {
        Some(n) => vec![n.clone()],
        None => trace_norm_maximizers(e, c, 64),
    };
    for n in candidates {
        if condition_check(e, c, &n, config.eigen_tol, cap)? {
            let norm = effective_operator(e, c, &n)?.trace_norm();
            return report_from_numbering(e, c, n, Method::ConditionCheckOnly, norm, true, None).map(Some);
        }
    }
    Ok(None)
}

/// Two-outcome measurement at the trace-norm maximizer without the
/// optimality certificate; its value is an achievable upper bound.
pub fn best_candidate_report(e: &Ensemble, c: &CostFunction, config: &SolverConfig) -> Result<GuessworkReport> {
    check_sizes(e, c)?;
    if !c.is_balanced() {
        return Err(Error::NotBalanced);
    }
    let m = e.len();
    if m > config.factorial_cap {
        return Err(Error::CapExceeded { m, cap: config.factorial_cap });
    }
    let n = trace_norm_maximizers(e, c, 1).remove(0);
    let norm = effective_operator(e, c, &n)?.trace_norm();
    report_from_numbering(e, c, n, Method::ConditionCheckOnly, norm, false, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::identity_cost;
    use crate::ensembles::{
        generate_mub, generate_polygon_antiprism, generate_random_uniform_prior, generate_sic, validate, Lambda,
    };
    use crate::operators::BlochVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pair() -> Ensemble {
        validate(vec![
            HermitianOperator::from_real_diagonal(&[0.5, 0.0]),
            HermitianOperator::from_real_diagonal(&[0.0, 0.5]),
        ])
        .unwrap()
    }

    fn trine() -> Ensemble {
        generate_polygon_antiprism(3, 0.0, Lambda::Pure).unwrap()
    }

    fn cfg() -> SolverConfig {
        SolverConfig::default()
    }

    #[test]
    fn effective_operator_examples() {
        let c = identity_cost(2).unwrap();
        let e = effective_operator(&pair(), &c, &Numbering::identity(2)).unwrap();
        assert!(e.distance(&HermitianOperator::from_real_diagonal(&[-0.5, 0.5])) < 1e-15);
        let flat = CostFunction::new(vec![7.0; 3]).unwrap();
        assert!(effective_operator(&trine(), &flat, &Numbering::identity(3)).unwrap().max_abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = generate_random_uniform_prior(5, 3, 8).unwrap();
        let c = CostFunction::random_balanced(5, &mut rng);
        for _ in 0..10 {
            let n = Numbering::random(5, &mut rng);
            assert!(effective_operator(&r, &c, &n).unwrap().trace().abs() < 1e-12);
        }
        assert!(effective_operator(&r, &identity_cost(4).unwrap(), &Numbering::identity(4)).is_err());
    }

    #[test]
    fn perfect_discrimination_costs_the_first_query() {
        let c = identity_cost(2).unwrap();
        let m = NumberingMeasurement::new(
            2,
            [
                (Numbering::identity(2), HermitianOperator::from_real_diagonal(&[1.0, 0.0])),
                (Numbering::reversal(2), HermitianOperator::from_real_diagonal(&[0.0, 1.0])),
            ],
        )
        .unwrap();
        assert!((guesswork_value(&pair(), &c, &m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uninformative_measurement_costs_the_mean() {
        let c = identity_cost(3).unwrap();
        let n0 = Numbering::from_one_based(&[2, 3, 1]).unwrap();
        let m = NumberingMeasurement::single_outcome(2, n0.clone());
        assert!((guesswork_value(&trine(), &c, &m).unwrap() - 2.0).abs() < 1e-15);
        // non-uniform prior: sum_t gamma(t) prior[n0(t)]
        let e = validate(vec![
            HermitianOperator::from_real_diagonal(&[0.5, 0.0]),
            HermitianOperator::from_real_diagonal(&[0.0, 0.3]),
            HermitianOperator::from_real_diagonal(&[0.1, 0.1]),
        ])
        .unwrap();
        let expected = 0.3 + 2.0 * 0.2 + 3.0 * 0.5;
        assert!((guesswork_value(&e, &c, &m).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn two_outcome_measurement_on_the_pair() {
        let c = identity_cost(2).unwrap();
        let n_star = Numbering::reversal(2);
        let e_star = effective_operator(&pair(), &c, &n_star).unwrap();
        assert!(e_star.distance(&HermitianOperator::from_real_diagonal(&[0.5, -0.5])) < 1e-15);
        let m = optimal_two_outcome_measurement(&pair(), &c, &n_star).unwrap();
        let at = |v: &[usize]| m.element(&Numbering::from_one_based(v).unwrap()).unwrap().clone();
        assert!(at(&[2, 1]).distance(&HermitianOperator::from_real_diagonal(&[0.0, 1.0])) < 1e-12);
        assert!(at(&[1, 2]).distance(&HermitianOperator::from_real_diagonal(&[1.0, 0.0])) < 1e-12);
        assert!(m.completeness_error() < 1e-12);
    }

    #[test]
    fn null_effective_operator_splits_evenly() {
        let flat = CostFunction::new(vec![1.0; 3]).unwrap();
        let m = optimal_two_outcome_measurement(&trine(), &flat, &Numbering::identity(3)).unwrap();
        assert_eq!(m.len(), 2);
        for (_, op) in m.elements() {
            assert!(op.distance(&HermitianOperator::identity(2).scale(0.5)) < 1e-12);
        }
    }

    #[test]
    fn degenerate_balancing_gives_single_outcome() {
        let e = validate(vec![HermitianOperator::identity(2).scale(0.5)]).unwrap();
        let c = identity_cost(1).unwrap();
        let m = optimal_two_outcome_measurement(&e, &c, &Numbering::identity(1)).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(guesswork_value(&e, &c, &m).unwrap(), 1.0);
    }

    #[test]
    fn unbalanced_cost_is_rejected() {
        let c = CostFunction::new(vec![0.0, 1.0, 3.0]).unwrap();
        assert!(matches!(
            optimal_two_outcome_measurement(&trine(), &c, &Numbering::identity(3)),
            Err(Error::NotBalanced)
        ));
        assert!(matches!(min_guesswork_qubit(&trine(), &c, SolveMethod::Auto, &cfg()), Err(Error::NotBalanced)));
        assert!(matches!(min_guesswork_general(&trine(), &c, None, &cfg()), Err(Error::NotBalanced)));
    }

    #[test]
    fn condition_check_examples() {
        let c = identity_cost(2).unwrap();
        assert!(condition_check(&pair(), &c, &Numbering::reversal(2), EIGEN_TOL, 10).unwrap());

        // trine with a skewed balanced cost: the minimizer of |v(E)| violates it
        let c = CostFunction::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap();
        let e = generate_random_uniform_prior(4, 2, 12).unwrap();
        let inst = QapInstance::from_problem(&e, &c, 0.0).unwrap();
        let worst = crate::enumerate::par_argmax(4, |p| -qap_objective(&inst, &Numbering::new(p.to_vec()).unwrap()).unwrap(), 0.0).0;
        assert!(!condition_check(&e, &c, &Numbering::new(worst).unwrap(), EIGEN_TOL, 10).unwrap());

        let big = generate_polygon_antiprism(11, 0.0, Lambda::Pure).unwrap();
        assert!(matches!(
            condition_check(&big, &identity_cost(11).unwrap(), &Numbering::identity(11), EIGEN_TOL, 10),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn suboptimal_trine_numbering_fails_the_condition() {
        // identity cost on the trine ties every numbering, so use a cost that
        // separates them
        let c = CostFunction::new(vec![1.0, 2.0, 3.0]).unwrap();
        let e = generate_polygon_antiprism(3, 0.0, Lambda::Value(0.2)).unwrap();
        let e = e.permuted(&Numbering::identity(3)).unwrap();
        let r = min_guesswork_qubit(&e, &c, SolveMethod::Brute, &cfg()).unwrap();
        assert!(r.condition_verified);
        // squash one vertex to break the symmetry
        let e = crate::ensembles::from_bloch_states(&[
            (1.0 / 3.0, BlochVector::new(0.3, 0.0, 0.0)),
            (1.0 / 3.0, BlochVector::new(-0.1, 0.2, 0.0)),
            (1.0 / 3.0, BlochVector::new(-0.1, -0.05, 0.0)),
        ])
        .unwrap();
        let inst = QapInstance::from_problem(&e, &c, 0.0).unwrap();
        let worst = crate::enumerate::par_argmax(3, |p| -qap_objective(&inst, &Numbering::new(p.to_vec()).unwrap()).unwrap(), 0.0).0;
        assert!(!condition_check(&e, &c, &Numbering::new(worst).unwrap(), EIGEN_TOL, 10).unwrap());
    }

    #[test]
    fn qubit_values_for_the_presets() {
        let cases = [
            (trine(), 2.0 - 1.0 / 3f64.sqrt()),
            (generate_sic().unwrap(), 2.5 - 0.5 * (5.0f64 / 3.0).sqrt()),
            (generate_mub().unwrap(), 3.5 - 35f64.sqrt() / 6.0),
        ];
        for (e, want) in cases {
            let c = identity_cost(e.len()).unwrap();
            for method in [SolveMethod::Auto, SolveMethod::Brute, SolveMethod::Benevolent] {
                let r = min_guesswork_qubit(&e, &c, method, &cfg()).unwrap();
                assert!((r.value - want).abs() < 1e-12, "{method:?}: {} vs {want}", r.value);
                assert!(r.condition_verified);
                assert!((r.value - (r.mean_cost - r.trace_norm_term)).abs() < 1e-12);
                let direct = guesswork_value(&e, &c, &r.measurement).unwrap();
                assert!((direct - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mub_optimum_pairs_antipodes() {
        let e = generate_mub().unwrap();
        let c = identity_cost(6).unwrap();
        let r = min_guesswork_qubit(&e, &c, SolveMethod::Brute, &cfg()).unwrap();
        let b = e.bloch().unwrap();
        let n = &r.optimal_numbering;
        for t in 0..3 {
            let (x, y) = (b[n.apply(t)], b[n.apply(5 - t)]);
            assert!((x.dot(&y) + x.norm() * y.norm()).abs() < 1e-12, "positions {} and {}", t + 1, 6 - t);
        }
    }

    #[test]
    fn optimum_beats_random_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for seed in 0..5 {
            let m = 3 + seed as usize % 3;
            let e = generate_random_uniform_prior(m, 2, 100 + seed).unwrap();
            let c = CostFunction::random_balanced(m, &mut rng);
            let best = min_guesswork_qubit(&e, &c, SolveMethod::Auto, &cfg()).unwrap().value;
            for _ in 0..200 {
                let meas = random_two_outcome_measurement(2, &c, &mut rng).unwrap();
                assert!(best <= guesswork_value(&e, &c, &meas).unwrap() + 1e-10);
            }
        }
    }

    #[test]
    fn auto_records_benevolent_path() {
        let r = min_guesswork_qubit(&generate_mub().unwrap(), &identity_cost(6).unwrap(), SolveMethod::Auto, &cfg())
            .unwrap();
        assert_eq!(r.method, Method::Benevolent);
        assert!(r.diagnostics.unwrap().is_benevolent());
        let r = min_guesswork_qubit(
            &generate_random_uniform_prior(5, 2, 3).unwrap(),
            &identity_cost(5).unwrap(),
            SolveMethod::Auto,
            &cfg(),
        )
        .unwrap();
        assert_eq!(r.method, Method::BruteForce);
    }

    #[test]
    fn benevolent_method_errors_without_structure() {
        let e = generate_random_uniform_prior(5, 2, 3).unwrap();
        let r = min_guesswork_qubit(&e, &identity_cost(5).unwrap(), SolveMethod::Benevolent, &cfg());
        assert!(matches!(r, Err(Error::Unavailable(_))));
    }

    #[test]
    fn qubit_solver_input_errors() {
        let skewed = validate(vec![
            HermitianOperator::from_real_diagonal(&[0.6, 0.0]),
            HermitianOperator::from_real_diagonal(&[0.0, 0.4]),
        ])
        .unwrap();
        let c = identity_cost(2).unwrap();
        assert!(matches!(min_guesswork_qubit(&skewed, &c, SolveMethod::Auto, &cfg()), Err(Error::NonUniformPrior)));
        let qutrit = generate_random_uniform_prior(3, 3, 1).unwrap();
        assert!(matches!(
            min_guesswork_qubit(&qutrit, &identity_cost(3).unwrap(), SolveMethod::Auto, &cfg()),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn beyond_the_cap() {
        let small = SolverConfig { factorial_cap: 5, ..cfg() };
        let e = generate_polygon_antiprism(7, 0.0, Lambda::Pure).unwrap();
        let c = identity_cost(7).unwrap();
        let r = min_guesswork_qubit(&e, &c, SolveMethod::Auto, &small).unwrap();
        assert_eq!(r.method, Method::Benevolent);
        assert!(!r.condition_verified);
        let exact = min_guesswork_qubit(&e, &c, SolveMethod::Brute, &cfg()).unwrap();
        assert!((r.value - exact.value).abs() < 1e-12);
        assert!(matches!(min_guesswork_qubit(&e, &c, SolveMethod::Brute, &small), Err(Error::CapExceeded { .. })));
        let rand = generate_random_uniform_prior(7, 2, 5).unwrap();
        let r = min_guesswork_qubit(&rand, &c, SolveMethod::Auto, &small).unwrap();
        assert_eq!(r.method, Method::ConditionCheckOnly);
        assert!(!r.condition_verified);
    }

    #[test]
    fn general_solver_on_embedded_orthogonal_pair() {
        let e = validate(vec![
            HermitianOperator::from_real_diagonal(&[0.5, 0.0, 0.0]),
            HermitianOperator::from_real_diagonal(&[0.0, 0.5, 0.0]),
        ])
        .unwrap();
        let r = min_guesswork_general(&e, &identity_cost(2).unwrap(), None, &cfg()).unwrap().unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.condition_verified);
        let m = &r.measurement;
        assert!(m.completeness_error() < 1e-10 && m.min_eigenvalue() > -1e-10);
    }

    #[test]
    fn general_solver_agrees_with_qubit_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for seed in 0..10 {
            let m = 2 + seed as usize % 4;
            let e = generate_random_uniform_prior(m, 2, seed).unwrap();
            let c = CostFunction::random_balanced(m, &mut rng);
            let q = min_guesswork_qubit(&e, &c, SolveMethod::Brute, &cfg()).unwrap();
            let g = min_guesswork_general(&e, &c, None, &cfg()).unwrap().unwrap();
            assert!((q.value - g.value).abs() < 1e-9);
        }
    }

    #[test]
    fn general_solver_can_decline() {
        // frozen from a random search over qutrit ensembles (see acceptance)
        let mut declined = 0;
        for seed in 0..40 {
            let e = generate_random_uniform_prior(3, 3, seed).unwrap();
            let c = identity_cost(3).unwrap();
            match min_guesswork_general(&e, &c, None, &cfg()).unwrap() {
                None => {
                    declined += 1;
                    let bound = best_candidate_report(&e, &c, &cfg()).unwrap();
                    assert!(!bound.condition_verified);
                }
                Some(r) => assert!(r.condition_verified),
            }
        }
        assert!(declined > 0);
    }

    #[test]
    fn permute_problem_identity_is_noop() {
        let e = generate_sic().unwrap();
        let c = identity_cost(4).unwrap();
        let id = Numbering::identity(4);
        let (e2, c2) = permute_problem(&e, &c, &id, &id).unwrap();
        assert_eq!(e2.states(), e.states());
        assert_eq!(c2, c);
    }

    #[test]
    fn covariance_maps_the_optimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let e = generate_random_uniform_prior(5, 2, 9).unwrap();
        let c = CostFunction::random_balanced(5, &mut rng);
        let base = min_guesswork_qubit(&e, &c, SolveMethod::Brute, &cfg()).unwrap();
        for _ in 0..5 {
            let s1 = Numbering::random(5, &mut rng);
            let s2 = Numbering::random(5, &mut rng);
            let (e2, c2) = permute_problem(&e, &c, &s1, &s2).unwrap();
            let moved = min_guesswork_qubit(&e2, &c2, SolveMethod::Brute, &cfg()).unwrap();
            assert!((moved.value - base.value).abs() < 1e-10);
            let mapped = s2.invert().compose(&base.optimal_numbering).unwrap().compose(&s1).unwrap();
            let inst = QapInstance::from_problem(&e2, &c2, 0.0).unwrap();
            let best = qap_objective(&inst, &moved.optimal_numbering).unwrap();
            assert!((qap_objective(&inst, &mapped).unwrap() - best).abs() < 1e-12);
        }
    }
}
