//! Learning algorithms and their reports.
//!
//! Quantum-capable learners draw labeled examples and lean on the
//! [`QuantumCapabilityOracle`] for order finding, subgroup discrete logs, or
//! factoring. Classical baselines get examples and public instance values
//! and nothing else; they cannot touch the capability oracle because their
//! signatures never see one. Every learner returns a [`LearnerReport`] that
//! records exactly what was consumed.

mod capability;
mod classical;
mod quantum;

pub use capability::{CapabilityCalls, QuantumCapabilityOracle};
pub use classical::{
    classical_baseline_learn, erm_brute_force, learn_pqc_cosine, BaselineFamily, BaselineInput,
};
pub use quantum::{
    dcri_sample_budget, learn_dcr_quantum, learn_dcri_quantum, learn_dlp_interval,
    learn_modexp_quantum, lemma_b1_event, modexp_sample_budget,
};

use serde::{Deserialize, Serialize};

use crate::concepts::HypothesisSpec;
use crate::error::Result;
use crate::numtheory::{crt_combine, Congruence};
use crate::SCHEMA_VERSION;

/// How a learning run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerOutcome {
    Ok,
    Failed,
    BudgetExceeded,
}

/// What one learning run produced and consumed.
///
/// `wall_time_s` is informational and excluded from replay comparisons;
/// everything else is a deterministic function of the seeds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerReport {
    pub schema_version: u32,
    pub learner_id: String,
    pub seed: u64,
    pub outcome: LearnerOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis: Option<HypothesisSpec>,
    pub oracle_queries: u64,
    pub capability_calls: CapabilityCalls,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_risk: Option<f64>,
    pub wall_time_s: f64,
}

impl LearnerReport {
    pub(crate) fn new(learner_id: &str, seed: u64) -> Self {
        LearnerReport {
            schema_version: SCHEMA_VERSION,
            learner_id: learner_id.to_string(),
            seed,
            outcome: LearnerOutcome::Ok,
            hypothesis: None,
            oracle_queries: 0,
            capability_calls: CapabilityCalls::default(),
            empirical_risk: None,
            wall_time_s: 0.0,
        }
    }
}

/// Congruences collected on an unknown exponent, one per example.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CongruenceLedger {
    pub collected: Vec<Congruence>,
}

impl CongruenceLedger {
    pub fn push(&mut self, congruence: Congruence) {
        self.collected.push(congruence);
    }

    /// Merge everything collected so far into a single congruence.
    pub fn combine(&self) -> Result<Congruence> {
        crt_combine(&self.collected)
    }
}
