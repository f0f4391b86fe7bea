//! Learners that never touch the capability oracle: brute-force empirical
//! risk minimization, the three-point cosine fitter, and the restricted
//! baseline families used as classical foils in benchmarks.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::concepts::{BitString, ConceptSpec, ExampleOracle, HypothesisSpec};
use crate::error::{Error, Result};
use crate::numtheory::Natural;

use super::{LearnerOutcome, LearnerReport};

/// Most entries a memorizing baseline may keep.
pub const LOOKUP_TABLE_CAP: usize = 1 << 12;

/// Pick the enumerated concept with the fewest disagreements on a fresh
/// sample. Ties go to the lowest enumeration index. `eval` supplies the
/// prediction of an enumerated concept on an input; the winning concept is
/// converted into the matching hypothesis.
pub fn erm_brute_force<O>(
    oracle: &mut O,
    enumeration: &[ConceptSpec],
    m_samples: u64,
    mut eval: impl FnMut(&ConceptSpec, &O::X) -> Result<O::Y>,
    seed: u64,
) -> Result<LearnerReport>
where
    O: ExampleOracle,
    O::Y: PartialEq,
{
    if enumeration.is_empty() {
        return Err(Error::domain("enumeration must not be empty"));
    }
    if m_samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let start = Instant::now();
    let queries_before = oracle.queries();
    let mut report = LearnerReport::new("erm_brute_force", seed);

    let examples: Vec<_> = (0..m_samples).map(|_| oracle.draw()).collect();
    let mut best: Option<(u64, usize)> = None;
    for (idx, concept) in enumeration.iter().enumerate() {
        let mut disagreements = 0u64;
        for ex in &examples {
            if eval(concept, &ex.x)? != ex.y {
                disagreements += 1;
            }
        }
        if best.map_or(true, |(err, _)| disagreements < err) {
            best = Some((disagreements, idx));
        }
    }
    let (err, idx) = best.expect("enumeration is non-empty");
    let hypothesis = HypothesisSpec::from_concept(&enumeration[idx]).ok_or_else(|| {
        Error::contract("winning concept family has no secret-free hypothesis form")
    })?;

    report.oracle_queries = oracle.queries() - queries_before;
    report.hypothesis = Some(hypothesis);
    report.empirical_risk = Some(err as f64 / m_samples as f64);
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

/// Recover `(alpha, beta, gamma)` of `alpha * cos(theta - beta) + gamma`
/// from exactly three labeled angles.
///
/// Solves the linear system in the basis `(cos theta, sin theta, 1)`. A
/// condition number of 1e8 or worse after row scaling is rejected as
/// degenerate: the caller should resample angles. When the fitted amplitude
/// is below 1e-12 the phase is reported as 0.
pub fn learn_pqc_cosine(samples: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if samples.len() != 3 {
        return Err(Error::domain(format!("need exactly 3 samples, got {}", samples.len())));
    }
    let mut a = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for (r, (theta, value)) in samples.iter().enumerate() {
        if !theta.is_finite() || !value.is_finite() {
            return Err(Error::domain("samples must be finite"));
        }
        a[r] = [theta.cos(), theta.sin(), 1.0];
        rhs[r] = *value;
    }
    for r in 0..3 {
        let scale = a[r].iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for x in &mut a[r] {
            *x /= scale;
        }
        rhs[r] /= scale;
    }

    let det = det3(&a);
    let inv = invert3(&a, det).ok_or_else(degenerate_angles)?;
    let condition = norm_inf(&a) * norm_inf(&inv);
    if !condition.is_finite() || condition >= 1e8 {
        return Err(degenerate_angles());
    }

    let cos_coeff = inv[0][0] * rhs[0] + inv[0][1] * rhs[1] + inv[0][2] * rhs[2];
    let sin_coeff = inv[1][0] * rhs[0] + inv[1][1] * rhs[1] + inv[1][2] * rhs[2];
    let gamma = inv[2][0] * rhs[0] + inv[2][1] * rhs[1] + inv[2][2] * rhs[2];

    let alpha = cos_coeff.hypot(sin_coeff);
    let beta = if alpha < 1e-12 {
        0.0
    } else {
        let raw = sin_coeff.atan2(cos_coeff);
        if raw < 0.0 {
            raw + std::f64::consts::TAU
        } else {
            raw
        }
    };
    Ok((alpha, beta, gamma))
}

fn degenerate_angles() -> Error {
    Error::Degenerate("angles are rank-deficient for a cosine fit: resample them".into())
}

fn det3(a: &[[f64; 3]; 3]) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn invert3(a: &[[f64; 3]; 3], det: f64) -> Option<[[f64; 3]; 3]> {
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let cof = |r1: usize, c1: usize, r2: usize, c2: usize| a[r1][c1] * a[r2][c2] - a[r1][c2] * a[r2][c1];
    Some([
        [cof(1, 1, 2, 2) / det, -cof(0, 1, 2, 2) / det, cof(0, 1, 1, 2) / det],
        [-cof(1, 0, 2, 2) / det, cof(0, 0, 2, 2) / det, -cof(0, 0, 1, 2) / det],
        [cof(1, 0, 2, 1) / det, -cof(0, 0, 2, 1) / det, cof(0, 0, 1, 1) / det],
    ])
}

fn norm_inf(a: &[[f64; 3]; 3]) -> f64 {
    a.iter().map(|row| row.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Restricted families available to classical baselines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineFamily {
    Constant,
    IntervalOnX,
    LinearThresholdOnBits,
    LookupTableCapped,
}

impl BaselineFamily {
    pub fn learner_id(self) -> &'static str {
        match self {
            BaselineFamily::Constant => "baseline_constant",
            BaselineFamily::IntervalOnX => "baseline_interval_on_x",
            BaselineFamily::LinearThresholdOnBits => "baseline_linear_threshold",
            BaselineFamily::LookupTableCapped => "baseline_lookup_table",
        }
    }
}

/// Inputs a baseline can handle: anything with a ring-element image and a
/// canonical table key.
pub trait BaselineInput {
    fn to_natural(&self) -> Natural;
    fn table_key(&self) -> String;
}

impl BaselineInput for Natural {
    fn to_natural(&self) -> Natural {
        self.clone()
    }

    fn table_key(&self) -> String {
        self.to_hex()
    }
}

impl BaselineInput for BitString {
    fn to_natural(&self) -> Natural {
        self.bits().iter().fold(Natural::zero(), |acc, &b| {
            let doubled = &acc + &acc;
            if b {
                doubled + Natural::one()
            } else {
                doubled
            }
        })
    }

    fn table_key(&self) -> String {
        self.to_string()
    }
}

/// Fit the best member of one restricted family to a fresh sample, using
/// nothing but example data. The signature admits no capability oracle, so
/// every report carries an all-zero capability snapshot by construction.
pub fn classical_baseline_learn<O>(
    oracle: &mut O,
    family: BaselineFamily,
    m_samples: u64,
    seed: u64,
) -> Result<LearnerReport>
where
    O: ExampleOracle<Y = u8>,
    O::X: BaselineInput,
{
    if m_samples == 0 {
        return Err(Error::domain("at least one sample is required"));
    }
    let start = Instant::now();
    let queries_before = oracle.queries();
    let mut report = LearnerReport::new(family.learner_id(), seed);

    let examples: Vec<_> = (0..m_samples).map(|_| oracle.draw()).collect();
    let (hypothesis, errors) = match family {
        BaselineFamily::Constant => fit_constant(&examples),
        BaselineFamily::IntervalOnX => fit_interval(&examples),
        BaselineFamily::LinearThresholdOnBits => fit_threshold(&examples),
        BaselineFamily::LookupTableCapped => fit_lookup(&examples),
    };

    report.oracle_queries = oracle.queries() - queries_before;
    report.hypothesis = Some(hypothesis);
    report.empirical_risk = Some(errors as f64 / m_samples as f64);
    report.outcome = LearnerOutcome::Ok;
    report.wall_time_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn fit_constant<X>(examples: &[crate::concepts::LabeledExample<X, u8>]) -> (HypothesisSpec, u64) {
    let ones = examples.iter().filter(|ex| ex.y == 1).count() as u64;
    let m = examples.len() as u64;
    let bit = u8::from(2 * ones > m);
    let errors = if bit == 1 { m - ones } else { ones };
    (HypothesisSpec::Constant { bit }, errors)
}

/// Exact interval ERM: aggregate by distinct value, then scan every
/// circular arc of distinct values with both polarities. The optimal
/// interval can always align its endpoints with observed points.
fn fit_interval<X: BaselineInput>(
    examples: &[crate::concepts::LabeledExample<X, u8>],
) -> (HypothesisSpec, u64) {
    let mut by_value: BTreeMap<Natural, (u64, u64)> = BTreeMap::new();
    for ex in examples {
        let slot = by_value.entry(ex.x.to_natural()).or_insert((0, 0));
        if ex.y == 1 {
            slot.0 += 1;
        } else {
            slot.1 += 1;
        }
    }
    let values: Vec<&Natural> = by_value.keys().collect();
    let weights: Vec<i64> = by_value.values().map(|&(pos, neg)| neg as i64 - pos as i64).collect();
    let positives: u64 = by_value.values().map(|&(pos, _)| pos).sum();
    let negatives: u64 = by_value.values().map(|&(_, neg)| neg).sum();
    let k = values.len();

    // prefix sums over the doubled array make circular arc sums O(1)
    let mut prefix = vec![0i64; 2 * k + 1];
    for i in 0..2 * k {
        prefix[i + 1] = prefix[i] + weights[i % k];
    }
    let arc_sum = |a: usize, len: usize| prefix[a + len] - prefix[a];

    let mut best: Option<(u64, usize, usize, u8)> = None;
    for inside in [1u8, 0u8] {
        for a in 0..k {
            for len in 1..=k {
                let s = arc_sum(a, len);
                let err = if inside == 1 {
                    positives as i64 + s
                } else {
                    negatives as i64 - s
                } as u64;
                if best.map_or(true, |(e, ..)| err < e) {
                    best = Some((err, a, len, inside));
                }
            }
        }
    }
    let (errors, a, len, inside) = best.expect("at least one sample");
    let lo = values[a].clone();
    let hi = values[(a + len - 1) % k].clone();
    (HypothesisSpec::IntervalOnX { lo, hi, inside }, errors)
}

/// Perceptron passes over the sample; exact minimization is intractable for
/// thresholds, and an illustrative foil does not need it.
fn fit_threshold<X: BaselineInput>(
    examples: &[crate::concepts::LabeledExample<X, u8>],
) -> (HypothesisSpec, u64) {
    let naturals: Vec<Natural> = examples.iter().map(|ex| ex.x.to_natural()).collect();
    let width = naturals.iter().map(|x| x.bits()).max().unwrap_or(1).max(1) as usize;
    let mut weights = vec![0.0f64; width];
    let mut bias = 0.0f64;

    let predict = |weights: &[f64], bias: f64, x: &Natural| {
        let mut acc = bias;
        for (j, w) in weights.iter().enumerate() {
            if x.bit(j as u64) {
                acc += w;
            }
        }
        u8::from(acc >= 0.0)
    };

    for _ in 0..64 {
        let mut mistakes = 0u64;
        for (x, ex) in naturals.iter().zip(examples) {
            if predict(&weights, bias, x) != ex.y {
                mistakes += 1;
                let step = if ex.y == 1 { 1.0 } else { -1.0 };
                for (j, w) in weights.iter_mut().enumerate() {
                    if x.bit(j as u64) {
                        *w += step;
                    }
                }
                bias += step;
            }
        }
        if mistakes == 0 {
            break;
        }
    }

    let errors = naturals
        .iter()
        .zip(examples)
        .filter(|(x, ex)| predict(&weights, bias, x) != ex.y)
        .count() as u64;
    (HypothesisSpec::LinearThresholdOnBits { weights, bias }, errors)
}

fn fit_lookup<X: BaselineInput>(
    examples: &[crate::concepts::LabeledExample<X, u8>],
) -> (HypothesisSpec, u64) {
    let mut table: BTreeMap<String, u8> = BTreeMap::new();
    for ex in examples {
        if table.len() >= LOOKUP_TABLE_CAP {
            break;
        }
        table.entry(ex.x.table_key()).or_insert(ex.y);
    }
    let ones = examples.iter().filter(|ex| ex.y == 1).count() as u64;
    let default = u8::from(2 * ones > examples.len() as u64);
    let errors = examples
        .iter()
        .filter(|ex| *table.get(&ex.x.table_key()).unwrap_or(&default) != ex.y)
        .count() as u64;
    let entries: Vec<(String, u8)> = table.into_iter().collect();
    (HypothesisSpec::LookupTable { entries, default }, errors)
}
