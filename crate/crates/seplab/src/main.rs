//! Command-line front end: generate instances, run learners against them,
//! drive the learner-to-solver wrappers, verify stored artifacts, and run
//! benchmark grids. Exit code 0 means pass, 1 means fail or error, 2 means
//! a usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use seplab::error::{Error, Result};
use seplab::harness::{
    read_json, read_jsonl, run_learning_cell, separation_benchmark, summarize_records,
    write_json, write_jsonl, BenchConfig, BenchRecord, CellParams,
};
use seplab::instances::{
    gen_2c_instance, gen_dcr_instance, gen_dcri_instance, gen_dlp_instance, InstanceKind,
    InstanceRecord,
};
use seplab::learners::{LearnerOutcome, LearnerReport};
use seplab::numtheory::Natural;
use seplab::reductions::{
    make_cheating_dcri_learner, make_cheating_ring_learner, reduce_learner_to_cuberoot_evaluator,
    reduce_learner_to_dcr_point, ConstantRingLearner, HonestDcriLearner, HonestRingLearner,
    RandomGuessLearner, ReductionOutcome,
};
use seplab::rng::{rng_from_seed, trial_seed, uniform_unit};
use seplab::SCHEMA_VERSION;

#[derive(Parser)]
#[command(name = "seplab", version, about = "Learning-separation laboratory")]
struct Cli {
    /// Master seed; every random stream is derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the resulting artifact to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the resulting artifact as JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance of a family.
    Gen {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Modulus (or prime) bit length; also the input length for dcri.
        #[arg(short = 'n', long)]
        size: u32,
        /// Cap on the 2-adic valuation of the group exponent (modexp2c).
        #[arg(long, default_value_t = 8)]
        c_max: u32,
    },
    /// Run one learner on a stored instance and score it on held-out draws.
    Learn {
        #[arg(long)]
        instance: PathBuf,
        /// Learner id, e.g. dcri_quantum or baseline_lookup_table.
        #[arg(long)]
        learner: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
    },
    /// Wrap a learner into a solver and check the recovered answer.
    Reduce {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum)]
        target: TargetArg,
        #[arg(long, value_enum)]
        learner: ReduceLearnerArg,
        /// Challenge element in lowercase hex (dcr-point; default seeded).
        #[arg(long)]
        challenge: Option<String>,
        /// Held-out test points (cuberoot target).
        #[arg(long, default_value_t = 100)]
        points: u64,
    },
    /// Re-check the invariants of a stored instance or record stream.
    Verify {
        #[arg(long, required_unless_present = "records", conflicts_with = "records")]
        instance: Option<PathBuf>,
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Grid-run learners over families and sizes per a JSON config.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dlp,
    Dcr,
    Modexp2c,
    Dcri,
}

impl From<KindArg> for InstanceKind {
    fn from(kind: KindArg) -> Self {
        match kind {
            KindArg::Dlp => InstanceKind::Dlp,
            KindArg::Dcr => InstanceKind::Dcr,
            KindArg::Modexp2c => InstanceKind::Modexp2c,
            KindArg::Dcri => InstanceKind::Dcri,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    DcrPoint,
    Cuberoot,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReduceLearnerArg {
    Honest,
    Cheating,
    RandomGuess,
}

#[derive(Serialize)]
struct LearnOutput {
    schema_version: u32,
    instance: String,
    accuracy: f64,
    report: LearnerReport,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let seed = cli.seed.unwrap_or(0);
    match &cli.command {
        Command::Gen { kind, size, c_max } => run_gen(cli, (*kind).into(), *size, *c_max, seed),
        Command::Learn { instance, learner, epsilon, delta } => {
            run_learn(cli, instance, learner, *epsilon, *delta, seed)
        }
        Command::Reduce { instance, target, learner, challenge, points } => {
            run_reduce(cli, instance, *target, *learner, challenge.as_deref(), *points, seed)
        }
        Command::Verify { instance, records } => {
            run_verify(instance.as_deref(), records.as_deref())
        }
        Command::Bench { config } => run_bench(cli, config),
    }
}

/// Write and/or print the artifact; fall back to a one-line summary.
fn emit<T: Serialize>(cli: &Cli, value: &T, summary: String) -> Result<()> {
    if let Some(path) = &cli.out {
        write_json(path, value)?;
    }
    if cli.json {
        println!("{}", serde_json::to_string_pretty(value)?);
    } else {
        println!("{summary}");
    }
    Ok(())
}

fn run_gen(cli: &Cli, kind: InstanceKind, size: u32, c_max: u32, seed: u64) -> Result<bool> {
    let generated = match kind {
        InstanceKind::Dlp => gen_dlp_instance(size, seed)?,
        InstanceKind::Dcr => gen_dcr_instance(size, seed)?,
        InstanceKind::Modexp2c => gen_2c_instance(size, c_max, seed)?,
        InstanceKind::Dcri => gen_dcri_instance(size, seed)?,
    };
    let summary = format!(
        "generated {} ({} candidates rejected)",
        generated.record.instance_id(),
        generated.rejected_candidates
    );
    emit(cli, &generated.record, summary)?;
    Ok(true)
}

fn run_learn(
    cli: &Cli,
    instance: &PathBuf,
    learner: &str,
    epsilon: f64,
    delta: f64,
    seed: u64,
) -> Result<bool> {
    let record: InstanceRecord = read_json(instance)?;
    record.validate()?;
    let params = CellParams::from_master(seed, 0, epsilon, delta);
    let (report, accuracy) = run_learning_cell(&record, learner, &params)?;
    let passed = report.outcome == LearnerOutcome::Ok;
    let output = LearnOutput {
        schema_version: SCHEMA_VERSION,
        instance: record.instance_id(),
        accuracy,
        report,
    };
    let summary = format!(
        "{} on {}: outcome {:?}, held-out accuracy {:.4}, {} examples",
        learner,
        output.instance,
        output.report.outcome,
        accuracy,
        output.report.oracle_queries
    );
    emit(cli, &output, summary)?;
    Ok(passed)
}

fn run_reduce(
    cli: &Cli,
    instance: &PathBuf,
    target: TargetArg,
    learner: ReduceLearnerArg,
    challenge: Option<&str>,
    points: u64,
    seed: u64,
) -> Result<bool> {
    let record: InstanceRecord = read_json(instance)?;
    record.validate()?;
    let public = record.rsa_public()?.clone();
    let outcome: ReductionOutcome = match target {
        TargetArg::DcrPoint => {
            let e = match challenge {
                Some(hex) => Natural::from_hex(hex)?,
                None => {
                    let mut rng = rng_from_seed(trial_seed(seed, 7));
                    uniform_unit(&public.modulus, &mut rng)
                }
            };
            let learner_seed = trial_seed(seed, 11);
            match learner {
                ReduceLearnerArg::Honest => reduce_learner_to_dcr_point(
                    &mut HonestDcriLearner::new(learner_seed),
                    &record,
                    &e,
                    seed,
                )?,
                ReduceLearnerArg::Cheating => reduce_learner_to_dcr_point(
                    &mut make_cheating_dcri_learner(&record)?,
                    &record,
                    &e,
                    seed,
                )?,
                ReduceLearnerArg::RandomGuess => reduce_learner_to_dcr_point(
                    &mut RandomGuessLearner::new(learner_seed),
                    &record,
                    &e,
                    seed,
                )?,
            }
        }
        TargetArg::Cuberoot => {
            if challenge.is_some() {
                return Err(Error::domain("--challenge applies to the dcr-point target only"));
            }
            if points == 0 {
                return Err(Error::domain("--points must be at least 1"));
            }
            let mut rng = rng_from_seed(trial_seed(seed, 17));
            let test_points: Vec<Natural> =
                (0..points).map(|_| uniform_unit(&public.modulus, &mut rng)).collect();
            let learner_seed = trial_seed(seed, 11);
            match learner {
                ReduceLearnerArg::Honest => reduce_learner_to_cuberoot_evaluator(
                    &mut HonestRingLearner::new(learner_seed),
                    &record,
                    &test_points,
                    seed,
                )?,
                ReduceLearnerArg::Cheating => reduce_learner_to_cuberoot_evaluator(
                    &mut make_cheating_ring_learner(&record)?,
                    &record,
                    &test_points,
                    seed,
                )?,
                ReduceLearnerArg::RandomGuess => {
                    let mut vrng = rng_from_seed(trial_seed(seed, 19));
                    let value = uniform_unit(&public.modulus, &mut vrng);
                    reduce_learner_to_cuberoot_evaluator(
                        &mut ConstantRingLearner { value },
                        &record,
                        &test_points,
                        seed,
                    )?
                }
            }
        }
    };
    let summary = format!(
        "target {:?}: verified = {}{}",
        outcome.target,
        outcome.verified,
        outcome
            .transcript
            .agreement
            .map_or(String::new(), |a| format!(", agreement {a:.4}"))
    );
    let verified = outcome.verified;
    emit(cli, &outcome, summary)?;
    Ok(verified)
}

fn run_verify(instance: Option<&std::path::Path>, records: Option<&std::path::Path>) -> Result<bool> {
    if let Some(path) = instance {
        let record: InstanceRecord = read_json(path)?;
        record.validate()?;
        println!("instance {} ok", record.instance_id());
        return Ok(true);
    }
    let path = records.expect("clap enforces one of --instance/--records");
    let records: Vec<BenchRecord> = read_jsonl(path)?;
    if records.is_empty() {
        return Err(Error::domain("record stream is empty"));
    }
    for (line, r) in records.iter().enumerate() {
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::integrity(format!(
                "record {line}: unsupported schema_version {}",
                r.schema_version
            )));
        }
        if !(0.0..=1.0).contains(&r.accuracy) {
            return Err(Error::integrity(format!(
                "record {line}: accuracy {} out of range",
                r.accuracy
            )));
        }
        if r.learner_id.starts_with("baseline") && !r.capability_calls.is_zero() {
            return Err(Error::integrity(format!(
                "record {line}: baseline shows capability calls"
            )));
        }
    }
    println!("{} records ok", records.len());
    Ok(true)
}

fn run_bench(cli: &Cli, config_path: &PathBuf) -> Result<bool> {
    let mut config: BenchConfig = read_json(config_path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let records = separation_benchmark(&config)?;
    if let Some(path) = &cli.out {
        write_jsonl(path, &records)?;
    }
    if cli.json {
        for record in &records {
            println!("{}", serde_json::to_string(record)?);
        }
    } else {
        print!("{}", summarize_records(&records));
    }
    Ok(true)
}
