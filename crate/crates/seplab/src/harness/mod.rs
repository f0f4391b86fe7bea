//! Experiment orchestration: empirical PAC evaluation, separation
//! benchmarks over the instance families, and JSON persistence with
//! seed-exact replay.

mod bench;
mod io;
mod pac;

pub use bench::{
    cosine_probe_error, learner_supports_family, run_learning_cell, separation_benchmark,
    summarize_records, BenchConfig, BenchRecord, CellParams, BASELINE_LEARNER_IDS,
    QUANTUM_LEARNER_IDS,
};
pub use io::{normalize_wall_time, read_json, read_jsonl, replay_equal, write_json, write_jsonl};
pub use pac::{
    estimate_error, eval_sample_size, exhaustive_error, lemma_b1_frequency, pac_pass_threshold,
    pac_trial_suite, realizable_erm_samples, FrequencyMode, PacEvalResult,
};
