//! Separation benchmark: grid-runs quantum-capable learners and classical
//! baselines across instance families and sizes, scores held-out accuracy
//! against the hidden concept, and snapshots the capability counters into
//! every record. Baseline runs are illustrative foils: their failure on
//! these families is an empirical picture, not a hardness proof.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::concepts::{
    dcri_cube_bit, dlp_window_contains, interval_on_x_eval, linear_threshold_eval,
    lookup_table_eval, trapdoor_bit_eval, BitString, CosineOracle, DcrOracle, DcriOracle,
    DlpOracle, ExampleOracle, HypothesisSpec, ModExpOracle,
};
use crate::error::{Error, Result};
use crate::instances::{
    gen_2c_instance, gen_dcr_instance, gen_dcri_instance, gen_dlp_instance, InstanceKind,
    InstanceRecord, DEFAULT_2C_THRESHOLDS,
};
use crate::learners::{
    classical_baseline_learn, dcri_sample_budget, learn_dcr_quantum, learn_dcri_quantum,
    learn_dlp_interval, learn_modexp_quantum, BaselineFamily, CapabilityCalls, LearnerOutcome,
    LearnerReport, QuantumCapabilityOracle,
};
use crate::numtheory::{mod_pow, Natural};
use crate::rng::{rng_from_seed, trial_seed, uniform_range, uniform_unit};
use crate::SCHEMA_VERSION;

use super::pac::{eval_sample_size, realizable_erm_samples};

/// Names accepted in `BenchConfig::learners`.
pub const QUANTUM_LEARNER_IDS: [&str; 4] =
    ["dlp_interval_quantum", "dcr_quantum", "modexp_quantum", "dcri_quantum"];
pub const BASELINE_LEARNER_IDS: [&str; 4] = [
    "baseline_constant",
    "baseline_interval_on_x",
    "baseline_linear_threshold",
    "baseline_lookup_table",
];

/// One benchmark request: the full grid of families x sizes x learners,
/// each cell run `trials` times. Unknown fields are rejected so a typo
/// cannot silently fall back to a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub families: Vec<InstanceKind>,
    pub sizes: Vec<u32>,
    pub learners: Vec<String>,
    pub epsilon: f64,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Outcome of one (family, size, learner, trial) cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub schema_version: u32,
    pub family: InstanceKind,
    pub n: u32,
    pub learner_id: String,
    pub trial: u64,
    /// Cell seed; instance, concept, oracle, and evaluation streams are
    /// all derived from it.
    pub seed: u64,
    /// Held-out agreement with the hidden concept, in [0, 1].
    pub accuracy: f64,
    pub wall_time_s: f64,
    pub oracle_queries: u64,
    pub capability_calls: CapabilityCalls,
    pub outcome: LearnerOutcome,
}

fn baseline_family(learner_id: &str) -> Option<BaselineFamily> {
    match learner_id {
        "baseline_constant" => Some(BaselineFamily::Constant),
        "baseline_interval_on_x" => Some(BaselineFamily::IntervalOnX),
        "baseline_linear_threshold" => Some(BaselineFamily::LinearThresholdOnBits),
        "baseline_lookup_table" => Some(BaselineFamily::LookupTableCapped),
        _ => None,
    }
}

/// Whether a learner can run on a family at all. Baselines emit bits, so
/// the ring-valued power-map family is off limits to them; each quantum
/// learner is built for exactly one example stream.
pub fn learner_supports_family(learner_id: &str, family: InstanceKind) -> bool {
    match learner_id {
        "dlp_interval_quantum" => family == InstanceKind::Dlp,
        "dcr_quantum" => family == InstanceKind::Dcr,
        "modexp_quantum" => family == InstanceKind::Modexp2c,
        "dcri_quantum" => family == InstanceKind::Dcri,
        id => baseline_family(id).is_some() && family != InstanceKind::Modexp2c,
    }
}

fn validate_config(config: &BenchConfig) -> Result<()> {
    if config.families.is_empty() || config.sizes.is_empty() || config.learners.is_empty() {
        return Err(Error::domain("families, sizes, and learners must all be non-empty"));
    }
    if config.trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    if !(config.epsilon > 0.0 && config.epsilon < 1.0) {
        return Err(Error::domain("epsilon must lie in (0, 1)"));
    }
    if !(config.delta > 0.0 && config.delta < 0.5) {
        return Err(Error::domain("delta must lie in (0, 1/2)"));
    }
    for learner in &config.learners {
        let known = QUANTUM_LEARNER_IDS.contains(&learner.as_str())
            || BASELINE_LEARNER_IDS.contains(&learner.as_str());
        if !known {
            return Err(Error::domain(format!("unknown learner '{learner}'")));
        }
    }
    Ok(())
}

/// Run the whole grid. Learner-level failures become records with
/// `outcome != ok` and accuracy 0; they never abort the grid. Structural
/// problems (unknown learner, impossible size, generation failure) do.
pub fn separation_benchmark(config: &BenchConfig) -> Result<Vec<BenchRecord>> {
    validate_config(config)?;
    let mut cells = Vec::new();
    for family in &config.families {
        for &n in &config.sizes {
            for learner in &config.learners {
                if !learner_supports_family(learner, *family) {
                    continue;
                }
                for trial in 0..config.trials {
                    cells.push((*family, n, learner.clone(), trial));
                }
            }
        }
    }
    if cells.is_empty() {
        return Err(Error::domain(
            "no learner in the config can run on any requested family",
        ));
    }
    let mut records: Vec<BenchRecord> = cells
        .into_par_iter()
        .map(|(family, n, learner, trial)| run_cell(config, family, n, &learner, trial))
        .collect::<Result<_>>()?;
    records.sort_by(|a, b| {
        (a.family as u8, a.n, &a.learner_id, a.trial)
            .cmp(&(b.family as u8, b.n, &b.learner_id, b.trial))
    });
    for record in &records {
        if baseline_family(&record.learner_id).is_some() && !record.capability_calls.is_zero() {
            return Err(Error::integrity(format!(
                "baseline record {}/{}/{} shows capability calls",
                record.family, record.n, record.learner_id
            )));
        }
    }
    Ok(records)
}

fn cell_seed(config: &BenchConfig, family: InstanceKind, n: u32, trial: u64) -> u64 {
    let s = trial_seed(config.seed, family as u64);
    let s = trial_seed(s, u64::from(n));
    trial_seed(s, trial)
}

/// Seeds and accuracy parameters of one learning run on one instance.
/// `from_master` derives the full set from a single seed, which is how
/// both the benchmark grid and the `learn` subcommand stay replayable.
#[derive(Clone, Copy, Debug)]
pub struct CellParams {
    pub epsilon: f64,
    pub delta: f64,
    pub concept_seed: u64,
    pub oracle_seed: u64,
    pub learner_seed: u64,
    pub eval_seed: u64,
}

impl CellParams {
    pub fn from_master(seed: u64, lane: u64, epsilon: f64, delta: f64) -> Self {
        CellParams {
            epsilon,
            delta,
            concept_seed: trial_seed(seed, 2),
            oracle_seed: trial_seed(seed, 100 + lane),
            learner_seed: trial_seed(seed, 200 + lane),
            eval_seed: trial_seed(seed, 300 + lane),
        }
    }
}

/// Drive one learner over one instance: draw a concept, run the learner
/// on a fresh example stream, and score the returned hypothesis on
/// held-out draws. Returns the report plus held-out accuracy; a learner
/// that fails is reported with accuracy 0 rather than as an error.
pub fn run_learning_cell(
    record: &InstanceRecord,
    learner_id: &str,
    params: &CellParams,
) -> Result<(LearnerReport, f64)> {
    if !learner_supports_family(learner_id, record.kind) {
        return Err(Error::domain(format!(
            "learner '{learner_id}' cannot run on family '{}'",
            record.kind
        )));
    }
    match record.kind {
        InstanceKind::Dlp => run_dlp_cell(record, learner_id, params),
        InstanceKind::Dcr => run_dcr_cell(record, learner_id, params),
        InstanceKind::Modexp2c => run_modexp_cell(record, learner_id, params),
        InstanceKind::Dcri => run_dcri_cell(record, learner_id, params),
    }
}

fn run_cell(
    config: &BenchConfig,
    family: InstanceKind,
    n: u32,
    learner_id: &str,
    trial: u64,
) -> Result<BenchRecord> {
    let seed = cell_seed(config, family, n, trial);
    let lane = config
        .learners
        .iter()
        .position(|l| l == learner_id)
        .expect("learner comes from the config") as u64;
    let inst_seed = trial_seed(seed, 1);
    let params = CellParams::from_master(seed, lane, config.epsilon, config.delta);

    let started = std::time::Instant::now();
    let generated = match family {
        InstanceKind::Dlp => gen_dlp_instance(n, inst_seed)?,
        InstanceKind::Dcr => gen_dcr_instance(n, inst_seed)?,
        InstanceKind::Modexp2c => gen_2c_instance(n, DEFAULT_2C_THRESHOLDS.0, inst_seed)?,
        InstanceKind::Dcri => gen_dcri_instance(n, inst_seed)?,
    };
    let (report, accuracy) = run_learning_cell(&generated.record, learner_id, &params)?;

    Ok(BenchRecord {
        schema_version: SCHEMA_VERSION,
        family,
        n,
        learner_id: learner_id.to_string(),
        trial,
        seed,
        accuracy,
        wall_time_s: started.elapsed().as_secs_f64(),
        oracle_queries: report.oracle_queries,
        capability_calls: report.capability_calls,
        outcome: report.outcome,
    })
}

/// A learner-level failure collapses to a zero-accuracy report so the
/// grid keeps running.
fn failed_report(learner_id: &str, seed: u64) -> LearnerReport {
    let mut report = LearnerReport::new(learner_id, seed);
    report.outcome = LearnerOutcome::Failed;
    report
}

fn eval_baseline_on_natural(hypothesis: &HypothesisSpec, x: &Natural) -> Option<u8> {
    match hypothesis {
        HypothesisSpec::Constant { bit } => Some(*bit),
        HypothesisSpec::IntervalOnX { lo, hi, inside } => {
            Some(interval_on_x_eval(lo, hi, *inside, x))
        }
        HypothesisSpec::LinearThresholdOnBits { weights, bias } => {
            Some(linear_threshold_eval(weights, *bias, x))
        }
        HypothesisSpec::LookupTable { entries, default } => {
            Some(lookup_table_eval(entries, *default, &x.to_hex()))
        }
        _ => None,
    }
}

fn eval_baseline_on_bits(hypothesis: &HypothesisSpec, x: &BitString) -> Option<u8> {
    use crate::learners::BaselineInput;
    match hypothesis {
        HypothesisSpec::Constant { bit } => Some(*bit),
        HypothesisSpec::IntervalOnX { lo, hi, inside } => {
            Some(interval_on_x_eval(lo, hi, *inside, &x.to_natural()))
        }
        HypothesisSpec::LinearThresholdOnBits { weights, bias } => {
            Some(linear_threshold_eval(weights, *bias, &x.to_natural()))
        }
        HypothesisSpec::LookupTable { entries, default } => {
            Some(lookup_table_eval(entries, *default, &x.table_key()))
        }
        _ => None,
    }
}

fn run_dlp_cell(
    record: &InstanceRecord,
    learner_id: &str,
    params: &CellParams,
) -> Result<(LearnerReport, f64)> {
    let group = record.prime_group()?;
    let pm1 = &group.p - &Natural::one();
    let mut crng = rng_from_seed(params.concept_seed);
    let i_true = uniform_range(&Natural::one(), &pm1, &mut crng);
    let mut oracle = DlpOracle::new(group, &i_true, params.oracle_seed)?;
    let class_size = pm1.to_u64().expect("group sizes stay below 2^64");
    let m_samples = realizable_erm_samples(class_size, params.epsilon, params.delta);

    let report = if learner_id == "dlp_interval_quantum" {
        let qco = QuantumCapabilityOracle::for_prime_group(group);
        learn_dlp_interval(&mut oracle, group, &qco, m_samples, params.learner_seed)
    } else {
        let family = baseline_family(learner_id).expect("validated");
        classical_baseline_learn(&mut oracle, family, m_samples, params.learner_seed)
    }
    .unwrap_or_else(|_| failed_report(learner_id, params.learner_seed));

    let Some(hypothesis) = report.hypothesis.clone() else {
        return Ok((report, 0.0));
    };
    let mut erng = rng_from_seed(params.eval_seed);
    let m_eval = eval_sample_size(params.epsilon);
    let mut disagreements = 0u64;
    for _ in 0..m_eval {
        let y = uniform_range(&Natural::one(), &pm1, &mut erng);
        let truth = u8::from(dlp_window_contains(&group.p, &i_true, &y));
        let predicted = match &hypothesis {
            HypothesisSpec::DlpInterval { i } => u8::from(dlp_window_contains(&group.p, i, &y)),
            other => {
                let x = mod_pow(&group.a, &y, &group.p)?;
                eval_baseline_on_natural(other, &x)
                    .ok_or_else(|| Error::contract("hypothesis cannot score a group element"))?
            }
        };
        if predicted != truth {
            disagreements += 1;
        }
    }
    Ok((report, 1.0 - disagreements as f64 / m_eval as f64))
}

fn run_dcr_cell(
    record: &InstanceRecord,
    learner_id: &str,
    params: &CellParams,
) -> Result<(LearnerReport, f64)> {
    let public = record.rsa_public()?;
    let n = public.n;
    let mut crng = rng_from_seed(params.concept_seed);
    let i_true = uniform_range(&Natural::one(), &Natural::from(u64::from(n)), &mut crng)
        .to_u64()
        .expect("bit position fits") as u32;
    let mut oracle = DcrOracle::new(public, i_true, params.oracle_seed)?;
    let m_samples = realizable_erm_samples(u64::from(n), params.epsilon, params.delta);

    let report = if learner_id == "dcr_quantum" {
        let qco = QuantumCapabilityOracle::for_rsa(public)?;
        learn_dcr_quantum(&mut oracle, public, &qco, m_samples, params.learner_seed)
    } else {
        let family = baseline_family(learner_id).expect("validated");
        classical_baseline_learn(&mut oracle, family, m_samples, params.learner_seed)
    }
    .unwrap_or_else(|_| failed_report(learner_id, params.learner_seed));

    let Some(hypothesis) = report.hypothesis.clone() else {
        return Ok((report, 0.0));
    };
    let mut erng = rng_from_seed(params.eval_seed);
    let m_eval = eval_sample_size(params.epsilon);
    let mut disagreements = 0u64;
    for _ in 0..m_eval {
        let y = uniform_unit(&public.modulus, &mut erng);
        let x = mod_pow(&y, &Natural::from(3u64), &public.modulus)?;
        let truth = u8::from(y.bit(u64::from(i_true) - 1));
        let predicted = match &hypothesis {
            HypothesisSpec::TrapdoorBit { d, i } => {
                trapdoor_bit_eval(&public.modulus, d, *i, &x)?
            }
            other => eval_baseline_on_natural(other, &x)
                .ok_or_else(|| Error::contract("hypothesis cannot score a ring element"))?,
        };
        if predicted != truth {
            disagreements += 1;
        }
    }
    Ok((report, 1.0 - disagreements as f64 / m_eval as f64))
}

fn run_modexp_cell(
    record: &InstanceRecord,
    learner_id: &str,
    params: &CellParams,
) -> Result<(LearnerReport, f64)> {
    let public = record.rsa_public()?;
    let phi = &record.secret()?.rsa.phi;
    let mut crng = rng_from_seed(params.concept_seed);
    let d_true = uniform_unit(phi, &mut crng);
    let mut oracle = ModExpOracle::new(public, &d_true, params.oracle_seed)?;

    debug_assert_eq!(learner_id, "modexp_quantum");
    let qco = QuantumCapabilityOracle::for_rsa(public)?;
    let report = learn_modexp_quantum(
        &mut oracle,
        public,
        params.delta,
        &qco,
        DEFAULT_2C_THRESHOLDS.0,
        None,
        params.learner_seed,
    )
    .unwrap_or_else(|_| failed_report(learner_id, params.learner_seed));

    let Some(HypothesisSpec::Modexp { d }) = report.hypothesis.clone() else {
        return Ok((report, 0.0));
    };
    let mut erng = rng_from_seed(params.eval_seed);
    let m_eval = eval_sample_size(params.epsilon);
    let mut disagreements = 0u64;
    for _ in 0..m_eval {
        let x = uniform_unit(&public.modulus, &mut erng);
        if mod_pow(&x, &d, &public.modulus)? != mod_pow(&x, &d_true, &public.modulus)? {
            disagreements += 1;
        }
    }
    Ok((report, 1.0 - disagreements as f64 / m_eval as f64))
}

fn run_dcri_cell(
    record: &InstanceRecord,
    learner_id: &str,
    params: &CellParams,
) -> Result<(LearnerReport, f64)> {
    let public = record.rsa_public()?;
    let n = public.n;
    let m_true = record
        .secret()?
        .m
        .clone()
        .ok_or_else(|| Error::integrity("point-recovery instance lacks its target"))?;
    let e_true = mod_pow(&m_true, &Natural::from(3u64), &public.modulus)?;
    let mut oracle = DcriOracle::from_secret(public, &m_true, params.oracle_seed)?;
    let m_samples = dcri_sample_budget(n, params.delta);

    let report = if learner_id == "dcri_quantum" {
        let qco = QuantumCapabilityOracle::for_rsa(public)?;
        learn_dcri_quantum(&mut oracle, public, params.delta, &qco, params.learner_seed)
    } else {
        let family = baseline_family(learner_id).expect("validated");
        classical_baseline_learn(&mut oracle, family, m_samples, params.learner_seed)
    }
    .unwrap_or_else(|_| failed_report(learner_id, params.learner_seed));

    let Some(hypothesis) = report.hypothesis.clone() else {
        return Ok((report, 0.0));
    };
    let e_hat = match &hypothesis {
        HypothesisSpec::Dcri { m } => {
            Some(mod_pow(m, &Natural::from(3u64), &public.modulus)?)
        }
        _ => None,
    };
    let mut erng = rng_from_seed(params.eval_seed);
    let m_eval = eval_sample_size(params.epsilon);
    let mut disagreements = 0u64;
    for _ in 0..m_eval {
        let x = BitString::random(n as usize, &mut erng);
        let truth = dcri_cube_bit(&e_true, n, &x)?;
        let predicted = match (&hypothesis, &e_hat) {
            (HypothesisSpec::Dcri { .. }, Some(e)) => dcri_cube_bit(e, n, &x)?,
            (other, _) => eval_baseline_on_bits(other, &x)
                .ok_or_else(|| Error::contract("hypothesis cannot score a bit vector"))?,
        };
        if predicted != truth {
            disagreements += 1;
        }
    }
    Ok((report, 1.0 - disagreements as f64 / m_eval as f64))
}

/// Aligned text table of mean accuracy and wall time per (family, n,
/// learner), in record order.
pub fn summarize_records(records: &[BenchRecord]) -> String {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(String, u32, String), (u64, f64, f64, f64)> = BTreeMap::new();
    for r in records {
        let key = (r.family.to_string(), r.n, r.learner_id.clone());
        let g = groups.entry(key).or_insert((0, 0.0, 0.0, 0.0));
        g.0 += 1;
        g.1 += r.accuracy;
        g.2 += r.wall_time_s;
        g.3 += r.oracle_queries as f64;
    }
    let mut out = String::from(
        "family    n   learner                     trials  accuracy   queries   seconds\n",
    );
    for ((family, n, learner), (count, acc, wall, queries)) in groups {
        let c = count as f64;
        out.push_str(&format!(
            "{family:<9} {n:<3} {learner:<27} {count:>6}  {:>8.4}  {:>8.1}  {:>8.4}\n",
            acc / c,
            queries / c,
            wall / c,
        ));
    }
    if records.iter().any(|r| baseline_family(&r.learner_id).is_some()) {
        out.push_str(
            "note: baseline rows illustrate classical behavior at these sizes; \
             they are not evidence about asymptotic hardness\n",
        );
    }
    out
}

/// Cosine-regression demo cell used by the bench CLI when asked for the
/// real-valued family: draws fresh parameters, fits from three angles,
/// and reports the max reconstruction error over a probe grid.
pub fn cosine_probe_error(seed: u64) -> Result<f64> {
    let mut rng = rng_from_seed(seed);
    let alpha = 3.0 * uniform_f64(&mut rng);
    let beta = std::f64::consts::TAU * uniform_f64(&mut rng);
    let gamma = 2.0 * uniform_f64(&mut rng) - 1.0;
    let mut oracle = CosineOracle::new(alpha, beta, gamma, trial_seed(seed, 1))?;
    let samples: Vec<(f64, f64)> = (0..3)
        .map(|_| {
            let ex = oracle.draw();
            (ex.x, ex.y)
        })
        .collect();
    let (a, b, g) = crate::learners::learn_pqc_cosine(&samples)?;
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let theta = k as f64 * std::f64::consts::TAU / 100.0;
        let truth = alpha * (theta - beta).cos() + gamma;
        let fitted = a * (theta - b).cos() + g;
        worst = worst.max((truth - fitted).abs());
    }
    Ok(worst)
}

fn uniform_f64(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::RngCore;
    (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(families: Vec<InstanceKind>, learners: Vec<&str>) -> BenchConfig {
        BenchConfig {
            families,
            sizes: vec![16],
            learners: learners.into_iter().map(String::from).collect(),
            epsilon: 0.1,
            delta: 0.1,
            trials: 3,
            seed: 42,
        }
    }

    #[test]
    fn quantum_learners_dominate_their_families() {
        let config = small_config(
            vec![InstanceKind::Dlp, InstanceKind::Dcr, InstanceKind::Dcri],
            vec!["dlp_interval_quantum", "dcr_quantum", "dcri_quantum", "baseline_constant"],
        );
        let records = separation_benchmark(&config).unwrap();
        // 3 families x 2 compatible learners x 3 trials
        assert_eq!(records.len(), 18);
        let mut quantum_ok = 0;
        for r in &records {
            assert!((0.0..=1.0).contains(&r.accuracy), "accuracy {}", r.accuracy);
            if r.learner_id.starts_with("baseline") {
                assert!(r.capability_calls.is_zero());
            } else if r.outcome == LearnerOutcome::Ok {
                quantum_ok += 1;
                assert!(
                    !r.capability_calls.is_zero(),
                    "{} shows no capability calls",
                    r.learner_id
                );
                assert!(r.accuracy >= 0.9, "{} accuracy {}", r.learner_id, r.accuracy);
            } else {
                // a failed run is recorded, scored zero, and asked for
                // nothing it did not use
                assert_eq!(r.accuracy, 0.0);
            }
        }
        assert!(quantum_ok >= 7, "only {quantum_ok} of 9 quantum runs settled");
    }

    #[test]
    fn modexp_family_rejects_baselines_quietly_and_runs_its_learner() {
        let config = small_config(
            vec![InstanceKind::Modexp2c],
            vec!["modexp_quantum", "baseline_lookup_table"],
        );
        let records = separation_benchmark(&config).unwrap();
        assert_eq!(records.len(), 3);
        assert!(records.iter().all(|r| r.learner_id == "modexp_quantum"));
        assert!(records.iter().all(|r| r.accuracy == 1.0));
    }

    #[test]
    fn config_grids_with_nothing_runnable_error_out() {
        let config =
            small_config(vec![InstanceKind::Modexp2c], vec!["baseline_constant"]);
        assert!(separation_benchmark(&config).is_err());
    }

    #[test]
    fn unknown_learners_are_rejected() {
        let config = small_config(vec![InstanceKind::Dlp], vec!["oracle_of_delphi"]);
        assert!(separation_benchmark(&config).is_err());
    }

    #[test]
    fn records_replay_identically_modulo_wall_time() {
        let config = small_config(vec![InstanceKind::Dcri], vec!["dcri_quantum"]);
        let mut a = separation_benchmark(&config).unwrap();
        let mut b = separation_benchmark(&config).unwrap();
        for r in a.iter_mut().chain(b.iter_mut()) {
            r.wall_time_s = 0.0;
        }
        assert_eq!(a, b);
    }

    #[test]
    fn summary_table_lists_every_group() {
        let config = small_config(
            vec![InstanceKind::Dcri],
            vec!["dcri_quantum", "baseline_lookup_table"],
        );
        let records = separation_benchmark(&config).unwrap();
        let table = summarize_records(&records);
        assert!(table.contains("dcri_quantum"));
        assert!(table.contains("baseline_lookup_table"));
        assert!(table.lines().count() >= 3);
        assert!(table.contains("illustrate"), "baseline rows carry the illustrative note");

        let quantum_only = separation_benchmark(&small_config(
            vec![InstanceKind::Dcri],
            vec!["dcri_quantum"],
        ))
        .unwrap();
        assert!(!summarize_records(&quantum_only).contains("illustrate"));
    }

    #[test]
    fn config_serde_is_strict_about_fields() {
        let good = r#"{"families":["dlp"],"sizes":[16],"learners":["dlp_interval_quantum"],"epsilon":0.1,"delta":0.1,"trials":5,"seed":7}"#;
        let parsed: BenchConfig = serde_json::from_str(good).unwrap();
        assert_eq!(parsed.families, vec![InstanceKind::Dlp]);
        let bad = r#"{"families":["dlp"],"sizes":[16],"learners":["dlp_interval_quantum"],"epsilon":0.1,"delta":0.1,"trials":5,"seed":7,"extra":1}"#;
        assert!(serde_json::from_str::<BenchConfig>(bad).is_err());
    }

    #[test]
    fn cosine_probe_reconstructs_to_float_precision() {
        for seed in 0..20 {
            match cosine_probe_error(seed) {
                Ok(worst) => assert!(worst < 1e-9, "seed {seed} worst {worst}"),
                Err(Error::Degenerate(_)) => {}
                Err(other) => panic!("unexpected error {other}"),
            }
        }
    }
}
