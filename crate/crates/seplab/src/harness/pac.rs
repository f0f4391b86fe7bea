//! Held-out error estimation, seeded trial suites with a one-sided
//! binomial pass bound, and the order-divisibility frequency check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::RsaSecret;
use crate::learners::lemma_b1_event;
use crate::numtheory::Natural;
use crate::rng::{rng_from_seed, trial_seed, uniform_unit};
use crate::SCHEMA_VERSION;

/// Disagreement fraction between hypothesis and concept on `m_eval` fresh
/// draws. Standard error is at most `1/(2 sqrt(m_eval))`.
pub fn estimate_error<X, Y: PartialEq>(
    mut hypothesis: impl FnMut(&X) -> Result<Y>,
    mut concept: impl FnMut(&X) -> Result<Y>,
    mut sampler: impl FnMut() -> X,
    m_eval: u64,
) -> Result<f64> {
    if m_eval == 0 {
        return Err(Error::domain("m_eval must be at least 1"));
    }
    let mut disagreements = 0u64;
    for _ in 0..m_eval {
        let x = sampler();
        if hypothesis(&x)? != concept(&x)? {
            disagreements += 1;
        }
    }
    Ok(disagreements as f64 / m_eval as f64)
}

/// Exact disagreement fraction over an enumerated domain.
pub fn exhaustive_error<X, Y: PartialEq>(
    mut hypothesis: impl FnMut(&X) -> Result<Y>,
    mut concept: impl FnMut(&X) -> Result<Y>,
    domain: impl IntoIterator<Item = X>,
) -> Result<f64> {
    let mut total = 0u64;
    let mut disagreements = 0u64;
    for x in domain {
        total += 1;
        if hypothesis(&x)? != concept(&x)? {
            disagreements += 1;
        }
    }
    if total == 0 {
        return Err(Error::domain("domain is empty"));
    }
    Ok(disagreements as f64 / total as f64)
}

/// Evaluation points per trial: enough that the estimator's noise is an
/// order of magnitude below the accuracy target.
pub fn eval_sample_size(epsilon: f64) -> u64 {
    (10.0 / (epsilon * epsilon)).max(100.0).ceil() as u64
}

/// Sample complexity of empirical risk minimization over a finite class
/// when the target lies in the class: `ceil((ln |C| + ln(1/delta)) / epsilon)`.
pub fn realizable_erm_samples(class_size: u64, epsilon: f64, delta: f64) -> u64 {
    assert!(class_size >= 1 && epsilon > 0.0 && delta > 0.0 && delta < 1.0);
    (((class_size as f64).ln() + (1.0 / delta).ln()) / epsilon).ceil() as u64
}

/// Largest failure rate still consistent with a true rate of `delta`:
/// one-sided 99.5% binomial slack so finite suites do not flake.
pub fn pac_pass_threshold(delta: f64, trials: u64) -> f64 {
    delta + 2.6 * (delta * (1.0 - delta) / trials as f64).sqrt()
}

/// Verdict of a suite of independent learning trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PacEvalResult {
    pub schema_version: u32,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: u64,
    pub per_trial_error: Vec<f64>,
    /// Fraction of trials whose estimated error exceeded `epsilon`.
    pub failure_rate: f64,
    pub pass: bool,
}

/// Run `trials` independent seeded trials in parallel and aggregate the
/// pass verdict. `trial_fn(index, seed)` must generate its own instance,
/// run the learner, and return the held-out error estimate; a trial that
/// errors out counts as estimated error 1.0, never dropped.
pub fn pac_trial_suite(
    master_seed: u64,
    trials: u64,
    epsilon: f64,
    delta: f64,
    trial_fn: impl Fn(u64, u64) -> Result<f64> + Sync,
) -> Result<PacEvalResult> {
    if trials < 30 {
        return Err(Error::domain("a trial suite needs at least 30 trials"));
    }
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::domain("epsilon and delta must lie in (0, 1)"));
    }
    let per_trial_error: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| trial_fn(t, trial_seed(master_seed, t)).unwrap_or(1.0))
        .collect();
    let failures = per_trial_error.iter().filter(|&&e| e > epsilon).count() as u64;
    let failure_rate = failures as f64 / trials as f64;
    Ok(PacEvalResult {
        schema_version: SCHEMA_VERSION,
        epsilon,
        delta,
        trials,
        per_trial_error,
        failure_rate,
        pass: failure_rate <= pac_pass_threshold(delta, trials),
    })
}

/// How to measure the order-divisibility frequency.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrequencyMode {
    /// Enumerate every unit of the ring; moduli up to 2^16 only.
    Exhaustive,
    Sampled { count: u64, seed: u64 },
}

/// Fraction of units whose multiplicative order is divisible by the
/// chosen odd prime-power factor of the group exponent. Exceeds 1/2 for
/// every odd factor, which is what the congruence-collection learner's
/// budget analysis leans on.
pub fn lemma_b1_frequency(
    secret: &RsaSecret,
    which_factor: usize,
    mode: FrequencyMode,
) -> Result<f64> {
    let modulus = &secret.p * &secret.q;
    match mode {
        FrequencyMode::Exhaustive => {
            let bound = modulus.to_u64().filter(|&m| m <= 1 << 16).ok_or_else(|| {
                Error::domain("exhaustive enumeration is limited to moduli up to 2^16")
            })?;
            let results: Vec<(u64, u64)> = (1..bound)
                .into_par_iter()
                .map(|raw| {
                    let x = Natural::from(raw);
                    if x.gcd(&modulus).is_one() {
                        match lemma_b1_event(&x, secret, which_factor) {
                            Ok(true) => Ok((1, 1)),
                            Ok(false) => Ok((0, 1)),
                            Err(e) => Err(e),
                        }
                    } else {
                        Ok((0, 0))
                    }
                })
                .collect::<Result<_>>()?;
            let hits: u64 = results.iter().map(|r| r.0).sum();
            let units: u64 = results.iter().map(|r| r.1).sum();
            Ok(hits as f64 / units as f64)
        }
        FrequencyMode::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::domain("sample count must be at least 1"));
            }
            let mut rng = rng_from_seed(seed);
            let mut hits = 0u64;
            for _ in 0..count {
                let x = uniform_unit(&modulus, &mut rng);
                if lemma_b1_event(&x, secret, which_factor)? {
                    hits += 1;
                }
            }
            Ok(hits as f64 / count as f64)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numtheory::mod_pow;

    #[test]
    fn estimator_is_zero_on_identical_functions_and_one_on_complements() {
        let mut rng = rng_from_seed(4);
        let modulus = Natural::from(55u64);
        let same = estimate_error(
            |x: &Natural| Ok(x.bit(0) as u8),
            |x| Ok(x.bit(0) as u8),
            || uniform_unit(&modulus, &mut rng),
            200,
        )
        .unwrap();
        assert_eq!(same, 0.0);
        let mut rng = rng_from_seed(4);
        let opposite = estimate_error(
            |x: &Natural| Ok(x.bit(0) as u8),
            |x| Ok(1 - x.bit(0) as u8),
            || uniform_unit(&modulus, &mut rng),
            200,
        )
        .unwrap();
        assert_eq!(opposite, 1.0);
    }

    #[test]
    fn exhaustive_error_scores_the_trapdoor_bit_hypothesis_exactly() {
        let secret =
            RsaSecret::from_primes(Natural::from(5u64), Natural::from(11u64)).unwrap();
        let modulus = Natural::from(55u64);
        let d_star = secret.d_star.clone().unwrap();
        let units: Vec<Natural> =
            (1u64..55).map(Natural::from).filter(|x| x.gcd(&modulus).is_one()).collect();
        let err = exhaustive_error(
            |x: &Natural| {
                crate::concepts::trapdoor_bit_eval(&modulus, &d_star, 2, x)
            },
            |x| crate::concepts::dcr_concept_eval(&secret, 2, x),
            units,
        )
        .unwrap();
        assert_eq!(err, 0.0);
    }

    #[test]
    fn sample_sizes_match_their_formulas() {
        assert_eq!(eval_sample_size(0.1), 1000);
        assert_eq!(eval_sample_size(0.5), 100);
        assert_eq!(realizable_erm_samples(64, 0.1, 0.1), 65);
    }

    #[test]
    fn trial_suite_aggregates_failures_and_applies_slack() {
        // 460 clean trials, 40 failing ones: rate 0.08 <= 0.1 + slack
        let result = pac_trial_suite(7, 500, 0.1, 0.1, |t, _seed| {
            Ok(if t % 25 == 0 { 1.0 } else { 0.0 })
        })
        .unwrap();
        assert_eq!(result.failure_rate, 0.04);
        assert!(result.pass);
        // an erroring trial counts as error 1.0
        let with_errors = pac_trial_suite(7, 100, 0.1, 0.1, |t, _seed| {
            if t < 60 {
                Err(Error::domain("boom"))
            } else {
                Ok(0.0)
            }
        })
        .unwrap();
        assert_eq!(with_errors.failure_rate, 0.6);
        assert!(!with_errors.pass);
    }

    #[test]
    fn trial_suite_rejects_tiny_suites() {
        assert!(pac_trial_suite(0, 10, 0.1, 0.1, |_, _| Ok(0.0)).is_err());
    }

    #[test]
    fn divisibility_frequency_at_the_worked_ring_is_four_fifths() {
        let secret =
            RsaSecret::from_primes(Natural::from(5u64), Natural::from(11u64)).unwrap();
        // odd part of lambda(55) = 20 is 5: its only factor sits at index 0
        let freq = lemma_b1_frequency(&secret, 0, FrequencyMode::Exhaustive).unwrap();
        assert_eq!(freq, 0.8);
        assert!(freq >= 0.5);
    }

    #[test]
    fn sampled_frequency_approaches_the_exhaustive_value() {
        let secret =
            RsaSecret::from_primes(Natural::from(5u64), Natural::from(11u64)).unwrap();
        let freq = lemma_b1_frequency(
            &secret,
            0,
            FrequencyMode::Sampled { count: 10_000, seed: 11 },
        )
        .unwrap();
        assert!((freq - 0.8).abs() < 0.02, "sampled frequency {freq}");
    }

    #[test]
    fn pass_threshold_shrinks_with_more_trials() {
        assert!(pac_pass_threshold(0.1, 100) > pac_pass_threshold(0.1, 10_000));
        assert!((pac_pass_threshold(0.1, 500) - 0.1348).abs() < 1e-3);
    }

    #[test]
    fn worked_power_identity_survives_the_estimator_contract() {
        // sanity anchor for these tests: cubing then raising to 27 is the
        // identity on the units of 55
        let modulus = Natural::from(55u64);
        let x = Natural::from(21u64);
        let cube = mod_pow(&x, &Natural::from(3u64), &modulus).unwrap();
        let back = mod_pow(&cube, &Natural::from(27u64), &modulus).unwrap();
        assert_eq!(back, x);
    }
}
