//! Quantum-capable learners.
//!
//! Each one draws labeled examples and converts them into calls against the
//! capability oracle: the power-map learner collects congruences on the
//! hidden exponent from orders and subgroup discrete logs, the bit learners
//! factor the modulus once and invert the cube map. None of them ever reads
//! instance secrets; everything beyond the examples comes from the
//! capability oracle.

use std::time::Instant;

use crate::concepts::{BitString, ExampleOracle, HypothesisSpec, LabeledExample};
use crate::error::{Error, Result};
use crate::instances::{PrimeGroup, RsaPublic, RsaSecret};
use crate::numtheory::{
    euler_phi, inv_mod, mod_pow, multiplicative_order, Congruence, Natural,
};

use super::{CongruenceLedger, LearnerOutcome, LearnerReport, QuantumCapabilityOracle};

/// Examples needed to pin the hidden exponent with failure probability
/// below `delta`: `ceil(8 * (modulus_bits + log2(1/delta)))`.
///
/// Each example halves, at worst, the chance that some prime-power factor of
/// the group exponent is still missing from the combined congruence; the
/// constant 8 makes the union over factors comfortably smaller than `delta`.
pub fn modexp_sample_budget(modulus_bits: u64, delta: f64) -> u64 {
    (8.0 * (modulus_bits as f64 + (1.0 / delta).log2())).ceil() as u64
}

/// Coupon-collector budget for covering all `n` bit positions with
/// probability at least `1 - delta/2`: `ceil(n * (ln n + ln(2/delta)))`.
pub fn dcri_sample_budget(n: u32, delta: f64) -> u64 {
    let n = f64::from(n);
    (n * (n.ln() + (2.0 / delta).ln())).ceil() as u64
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::domain(format!("delta must lie in (0, 1/2), got {delta}")));
    }
    Ok(())
}

/// Identify the exponent of a power map `x -> x^d mod N` from examples.
///
/// For every drawn `(x, x^d)` the learner asks the capability oracle for
/// `r = ord(x)` and the subgroup discrete log `a` of the label, recording
/// `d = a (mod r)`. The merged congruence pins `d` modulo the least common
/// multiple `M` of the observed orders; the remaining ambiguity is at most
/// the 2-power part of the group exponent, so the learner enumerates the
/// `2^c_max` candidates below `M * 2^c_max`, keeps those consistent with
/// every drawn example, and returns the smallest. Success is functional:
/// the returned exponent agrees with `d` on all of `Z_N^*` with probability
/// at least `1 - delta`, though it need not equal `d` as an integer.
pub fn learn_modexp_quantum<O>(
    oracle: &mut O,
    public: &RsaPublic,
    delta: f64,
    qco: &QuantumCapabilityOracle,
    c_max: u32,
    budget: Option<u64>,
    seed: u64,
) -> Result<LearnerReport>
where
    O: ExampleOracle<X = Natural, Y = Natural>,
{
    check_delta(delta)?;
    if c_max > 30 {
        return Err(Error::domain(format!("candidate enumeration bound 2^{c_max} is too large")));
    }
    let start = Instant::now();
    let calls_before = qco.calls();
    let queries_before = oracle.queries();
    let mut report = LearnerReport::new("modexp_quantum", seed);

    let wanted = modexp_sample_budget(public.modulus.bits(), delta);
    if let Some(cap) = budget {
        if wanted > cap {
            report.outcome = LearnerOutcome::BudgetExceeded;
            report.wall_time_s = start.elapsed().as_secs_f64();
            return Ok(report);
        }
    }

    let examples: Vec<LabeledExample<Natural, Natural>> =
        (0..wanted).map(|_| oracle.draw()).collect();

    let mut ledger = CongruenceLedger::default();
    for ex in &examples {
        let r = qco.order(&ex.x)?;
        let a = qco.dlog(&ex.x, &ex.y)?;
        ledger.push(Congruence::new(a, r)?);
    }
    let combined = ledger.combine()?;

    let survivor = smallest_consistent_exponent(&combined, c_max, &examples, &public.modulus)?;
    report.oracle_queries = oracle.queries() - queries_before;
    report.capability_calls = qco.calls().since(&calls_before);
    match survivor {
        Some(d_hat) => {
            report.hypothesis = Some(HypothesisSpec::Modexp { d: d_hat });
            report.empirical_risk = Some(0.0);
        }
        None => report.outcome = LearnerOutcome::Failed,
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Smallest positive `d` with `d = combined.residue (mod combined.modulus)`
/// and `d < combined.modulus * 2^c_max` that reproduces every example.
fn smallest_consistent_exponent(
    combined: &Congruence,
    c_max: u32,
    examples: &[LabeledExample<Natural, Natural>],
    modulus: &Natural,
) -> Result<Option<Natural>> {
    let mut candidate = combined.residue.clone();
    for _ in 0..(1u64 << c_max) {
        if !candidate.is_zero() {
            let consistent = examples
                .iter()
                .all(|ex| mod_pow(&ex.x, &candidate, modulus).map_or(false, |y| y == ex.y));
            if consistent {
                return Ok(Some(candidate));
            }
        }
        candidate = &candidate + &combined.modulus;
    }
    Ok(None)
}

/// True iff the chosen odd prime-power factor of `phi(N)` divides the
/// multiplicative order of `x` modulo `N`.
pub fn lemma_b1_event(x: &Natural, secret: &RsaSecret, which_factor: usize) -> Result<bool> {
    let factors = secret.odd_part_factors.factors();
    let (p, k) = factors
        .get(which_factor)
        .ok_or_else(|| Error::domain(format!("no odd factor with index {which_factor}")))?;
    let n_modulus = &secret.p * &secret.q;
    let order = multiplicative_order(x, &n_modulus, &secret.phi_factors())?;
    Ok((order % p.pow(*k)).is_zero())
}

/// Reconstruct the addressed ring element bit by bit, then invert the cube.
///
/// Draws up to the coupon-collector budget, bucketing labels by the bit
/// position each input addresses. Once every position has been seen the
/// element `E` is assembled, the capability oracle factors the modulus, and
/// `m = E^(3^-1 mod phi) mod N` inverts the cube map exactly.
pub fn learn_dcri_quantum<O>(
    oracle: &mut O,
    public: &RsaPublic,
    delta: f64,
    qco: &QuantumCapabilityOracle,
    seed: u64,
) -> Result<LearnerReport>
where
    O: ExampleOracle<X = BitString, Y = u8>,
{
    check_delta(delta)?;
    let n = public.n;
    if n == 0 || !n.is_power_of_two() || n > 64 {
        return Err(Error::domain(format!("input length {n} is not a power of two within 1..=64")));
    }
    let start = Instant::now();
    let calls_before = qco.calls();
    let queries_before = oracle.queries();
    let mut report = LearnerReport::new("dcri_quantum", seed);

    let budget = dcri_sample_budget(n, delta);
    let prefix_len = n.trailing_zeros();
    let mut buckets: Vec<Option<u8>> = vec![None; n as usize];
    let mut covered = 0u32;
    for _ in 0..budget {
        if covered == n {
            break;
        }
        let ex = oracle.draw();
        let k = ex.x.prefix_int(prefix_len) as usize;
        match buckets[k] {
            None => {
                buckets[k] = Some(ex.y);
                covered += 1;
            }
            Some(prior) if prior != ex.y => {
                return Err(Error::integrity(format!(
                    "conflicting labels for bit position {k}: example stream is inconsistent"
                )));
            }
            Some(_) => {}
        }
    }

    report.oracle_queries = oracle.queries() - queries_before;
    if covered < n {
        report.outcome = LearnerOutcome::Failed;
        report.capability_calls = qco.calls().since(&calls_before);
        report.wall_time_s = start.elapsed().as_secs_f64();
        return Ok(report);
    }

    let mut assembled = 0u64;
    for (k, bucket) in buckets.iter().enumerate() {
        if bucket.expect("all positions covered") == 1 {
            assembled |= 1 << k;
        }
    }
    let e = Natural::from(assembled);
    let phi = euler_phi(&qco.factor());
    let d = inv_mod(&Natural::from(3u64), &phi)
        .ok_or_else(|| Error::domain("cube map is not invertible: 3 divides phi"))?;
    let m_hat = mod_pow(&e, &d, &public.modulus)?;

    report.hypothesis = Some(HypothesisSpec::Dcri { m: m_hat });
    report.capability_calls = qco.calls().since(&calls_before);
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Recover the trapdoor exponent by factoring, then pick the bit position
/// by empirical risk minimization over the drawn examples.
///
/// Ties go to the smallest position. When even the best position disagrees
/// with more than 49% of the sample the oracle cannot be a trapdoor-bit
/// stream for this instance and the run fails.
pub fn learn_dcr_quantum<O>(
    oracle: &mut O,
    public: &RsaPublic,
    qco: &QuantumCapabilityOracle,
    m_samples: u64,
    seed: u64,
) -> Result<LearnerReport>
where
    O: ExampleOracle<X = Natural, Y = u8>,
{
    if m_samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let start = Instant::now();
    let calls_before = qco.calls();
    let queries_before = oracle.queries();
    let mut report = LearnerReport::new("dcr_quantum", seed);

    let phi = euler_phi(&qco.factor());
    let d_star = inv_mod(&Natural::from(3u64), &phi)
        .ok_or_else(|| Error::domain("cube map is not invertible: 3 divides phi"))?;

    let examples: Vec<LabeledExample<Natural, u8>> = (0..m_samples).map(|_| oracle.draw()).collect();
    let roots: Vec<Natural> = examples
        .iter()
        .map(|ex| mod_pow(&ex.x, &d_star, &public.modulus))
        .collect::<Result<_>>()?;

    let mut best: Option<(u64, u32)> = None;
    for i in 1..=public.n {
        let disagreements = roots
            .iter()
            .zip(&examples)
            .filter(|(root, ex)| u8::from(root.bit(u64::from(i) - 1)) != ex.y)
            .count() as u64;
        if best.map_or(true, |(err, _)| disagreements < err) {
            best = Some((disagreements, i));
        }
    }
    let (err, i) = best.expect("instance width is at least one bit");

    report.oracle_queries = oracle.queries() - queries_before;
    report.capability_calls = qco.calls().since(&calls_before);
    report.empirical_risk = Some(err as f64 / m_samples as f64);
    if err as f64 > 0.49 * m_samples as f64 {
        report.outcome = LearnerOutcome::Failed;
    } else {
        report.hypothesis = Some(HypothesisSpec::TrapdoorBit { d: d_star, i });
    }
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Fit a wrap-around exponent window by mapping examples to exponents.
///
/// Every drawn point costs one capability discrete log. Candidate window
/// starts are aligned to observed exponents: each `l` contributes `l` itself
/// and `l - (p-3)/2`, the starts that put `l` on a window boundary. The
/// empirical minimizer over that set is returned even when it still
/// disagrees with part of the sample; ties go to the smallest start.
pub fn learn_dlp_interval<O>(
    oracle: &mut O,
    group: &PrimeGroup,
    qco: &QuantumCapabilityOracle,
    m_samples: u64,
    seed: u64,
) -> Result<LearnerReport>
where
    O: ExampleOracle<X = Natural, Y = u8>,
{
    if m_samples < 2 {
        return Err(Error::domain("at least two samples are required"));
    }
    let start = Instant::now();
    let calls_before = qco.calls();
    let queries_before = oracle.queries();
    let mut report = LearnerReport::new("dlp_interval_quantum", seed);

    let p = &group.p;
    let pm1 = p - &Natural::one();
    let half_span = (p - &Natural::from(3u64)) / &Natural::from(2u64);

    let mut logs: Vec<(Natural, u8)> = Vec::with_capacity(m_samples as usize);
    for _ in 0..m_samples {
        let ex = oracle.draw();
        logs.push((qco.dlog(&group.a, &ex.x)?, ex.y));
    }

    // exponent residues live in {1, ..., p-1}; fold 0 back to p-1
    let into_exponent = |residue: Natural| if residue.is_zero() { pm1.clone() } else { residue };
    let mut candidates: Vec<Natural> = Vec::with_capacity(2 * logs.len());
    for (l, _) in &logs {
        candidates.push(l.clone());
        candidates.push(into_exponent((l + &pm1 - &half_span) % &pm1));
    }
    candidates.sort();
    candidates.dedup();

    let mut best: Option<(u64, Natural)> = None;
    for cand in candidates {
        let disagreements = logs
            .iter()
            .filter(|(l, y)| {
                u8::from(crate::concepts::dlp_window_contains(p, &cand, l)) != *y
            })
            .count() as u64;
        if best.as_ref().map_or(true, |(err, _)| disagreements < *err) {
            best = Some((disagreements, cand));
        }
    }
    let (err, i_hat) = best.expect("at least two samples yield candidates");

    report.oracle_queries = oracle.queries() - queries_before;
    report.capability_calls = qco.calls().since(&calls_before);
    report.empirical_risk = Some(err as f64 / m_samples as f64);
    report.hypothesis = Some(HypothesisSpec::DlpInterval { i: i_hat });
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}
