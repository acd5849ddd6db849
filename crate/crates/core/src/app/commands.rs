use std::fmt::Write as _;
use std::fs;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use super::config::{OracleChoice, RunConfig, DEFAULT_THETA};
use super::eval::{run_eval, EvalReport};
use super::io::{create, load_pair_scores, load_records, open, read_labeled_pairs, read_truth, write_err, write_records, write_top_k, write_truth};
use super::synth::{generate_corpus, SyntheticSpec};
use super::load_template;
use crate::error::{Error, Result};
use crate::init::{initialize, score_pairs, PairScore};
use crate::model::{FactoredDistribution, Record, BITS};
use crate::oracle::{
    estimate_accuracy, GroundTruth, Oracle, RemoteOracle, ScriptedOracle, SimulatedOracle, Theta,
};
use crate::refine::{run_loop, RefinementTrace};
use crate::select::{build_questions, candidate_pairs, Budget, Selector};

pub const DISTRIBUTION_FILE: &str = "distribution.json";
pub const TOP_K_FILE: &str = "top_partitions.txt";
pub const TRACE_FILE: &str = "trace.jsonl";
pub const CURVE_FILE: &str = "entropy_curve.csv";
pub const EVAL_FILE: &str = "eval.csv";
pub const RECORDS_FILE: &str = "records.csv";
pub const TRUTH_FILE: &str = "truth.csv";

/// Answers below this accuracy carry almost no information.
pub const THETA_WARNING: f64 = 0.55;

fn required<'a>(path: &'a Option<PathBuf>, key: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| Error::Config(format!("`{key}` is required for this command")))
}

fn output_path(config: &RunConfig, name: &str) -> Result<PathBuf> {
    fs::create_dir_all(&config.out_dir)
        .map_err(|e| Error::Io(format!("cannot create {}: {e}", config.out_dir.display())))?;
    Ok(config.out_dir.join(name))
}

fn score_sources(records: &[Record], config: &RunConfig) -> Result<Vec<Vec<PairScore>>> {
    let mut sources = Vec::new();
    if config.baseline_matcher {
        sources.push(score_pairs(records, &config.matcher(records))?);
    }
    let known: std::collections::HashSet<_> = records.iter().map(Record::id).collect();
    for path in &config.pair_scores {
        let scores = load_pair_scores(path)?;
        for s in &scores {
            for id in [s.pair.a(), s.pair.b()] {
                if !known.contains(id) {
                    return Err(Error::UnknownRecordId(id.clone()));
                }
            }
        }
        sources.push(scores);
    }
    if sources.is_empty() {
        return Err(Error::Config(
            "no score source: enable baseline_matcher or supply pair_scores".into(),
        ));
    }
    Ok(sources)
}

fn write_distribution(config: &RunConfig, dist: &FactoredDistribution) -> Result<()> {
    let mut f = create(&output_path(config, DISTRIBUTION_FILE)?)?;
    serde_json::to_writer_pretty(&mut f, dist).map_err(write_err)?;
    f.write_all(b"\n").map_err(write_err)?;
    write_top_k(&dist.top_k(config.top_k), create(&output_path(config, TOP_K_FILE)?)?)
}

pub fn load_distribution(path: &Path) -> Result<FactoredDistribution> {
    serde_json::from_reader(BufReader::new(open(path)?))
        .map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitOutcome {
    pub distribution: FactoredDistribution,
    pub entropy_bits: f64,
}

fn build_initial(records: &[Record], config: &RunConfig) -> Result<FactoredDistribution> {
    initialize(records, &score_sources(records, config)?, &config.init_config())
}

/// Builds the initial distribution and writes it with its top-K table.
pub fn cmd_init(config: &RunConfig) -> Result<InitOutcome> {
    config.validate()?;
    let records = load_records(required(&config.records, "records")?)?;
    let distribution = build_initial(&records, config)?;
    write_distribution(config, &distribution)?;
    let entropy_bits = distribution.entropy(BITS)?;
    Ok(InitOutcome {
        distribution,
        entropy_bits,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolveOutcome {
    pub distribution: FactoredDistribution,
    pub trace: RefinementTrace,
    pub theta: Theta,
    /// Present when theta was estimated from a labeled sample.
    pub estimate: Option<(usize, usize)>,
}

fn make_oracle(config: &RunConfig) -> Result<Box<dyn Oracle>> {
    Ok(match config.oracle {
        OracleChoice::Remote => Box::new(RemoteOracle::from_env(config.remote_config(), config.cost_model()?)?),
        OracleChoice::Simulated => {
            let truth = read_truth(open(required(&config.truth, "truth")?)?)?;
            let accuracy = config.make_theta(config.theta.unwrap_or(DEFAULT_THETA))?;
            Box::new(SimulatedOracle::new(GroundTruth::new(truth), accuracy, config.seed))
        }
        OracleChoice::Scripted => {
            let path = required(&config.script, "script")?;
            let file = open(path)?;
            let is_trace = path.extension().is_some_and(|e| e == "jsonl" || e == "json");
            let oracle = if is_trace {
                ScriptedOracle::from_trace(BufReader::new(file))
            } else {
                ScriptedOracle::from_csv(file)
            };
            Box::new(oracle.map_err(|e| Error::MalformedInput(format!("{}: {e}", path.display())))?)
        }
    })
}

/// Runs the select → ask → update loop and writes the final distribution,
/// its top-K table, the question log and the entropy curve.
pub fn cmd_resolve(config: &RunConfig) -> Result<ResolveOutcome> {
    config.validate()?;
    let records = load_records(required(&config.records, "records")?)?;
    let initial = match &config.distribution {
        Some(path) => load_distribution(path)?,
        None => build_initial(&records, config)?,
    };
    let template = load_template(config)?;
    let cost = config.cost_model()?;
    let questions = build_questions(&candidate_pairs(&initial), &records, &template, &cost)?;
    let oracle = make_oracle(config)?;

    let (theta, estimate) = match &config.accuracy_sample {
        Some(path) => {
            let labeled = read_labeled_pairs(open(path)?)?;
            let pairs: Vec<_> = labeled.iter().map(|(p, _)| p.clone()).collect();
            let sample: Vec<_> = build_questions(&pairs, &records, &template, &cost)?
                .into_iter()
                .zip(labeled.iter().map(|(_, v)| *v))
                .collect();
            let est = estimate_accuracy(oracle.as_ref(), &sample)??;
            (est.theta, Some((est.correct, est.asked)))
        }
        None => (config.fixed_theta()?, None),
    };
    if theta.value() < THETA_WARNING {
        eprintln!(
            "warning: theta = {} is below {THETA_WARNING}; answers will barely move the distribution",
            theta.value()
        );
    }

    let (distribution, trace) = run_loop(
        initial,
        &questions,
        oracle.as_ref(),
        &mut Selector::new(config.strategy, config.seed),
        Budget::new(config.budget),
        &config.loop_config(theta),
    )?;
    write_distribution(config, &distribution)?;
    trace
        .write_jsonl(create(&output_path(config, TRACE_FILE)?)?)
        .map_err(write_err)?;
    trace
        .write_curve_csv(create(&output_path(config, CURVE_FILE)?)?)
        .map_err(write_err)?;
    Ok(ResolveOutcome {
        distribution,
        trace,
        theta,
        estimate,
    })
}

/// Renders the saved distribution and, when present, the question log.
pub fn cmd_report(config: &RunConfig) -> Result<String> {
    let dist = load_distribution(&config.out_dir.join(DISTRIBUTION_FILE))?;
    let mut out = String::new();
    let mut table = Vec::new();
    write_top_k(&dist.top_k(config.top_k), &mut table)?;
    let _ = writeln!(out, "entropy: {:.6} bits", dist.entropy(BITS)?);
    let _ = writeln!(out, "components: {}", dist.components().len());
    out.push_str(&String::from_utf8_lossy(&table));

    let trace_path = config.out_dir.join(TRACE_FILE);
    if trace_path.exists() {
        let trace = RefinementTrace::read_jsonl(BufReader::new(open(&trace_path)?))
            .map_err(|e| Error::MalformedInput(format!("{}: {e}", trace_path.display())))?;
        let s = &trace.summary;
        let _ = writeln!(
            out,
            "\nstopped: {:?} after {} iterations; entropy {:.6} -> {:.6} bits; tokens billed {} (budget {}/{})",
            s.stop_reason, s.iterations, s.initial_entropy, s.final_entropy, s.tokens_billed, s.budget_spent, s.budget_total
        );
        let _ = writeln!(out, "iteration\tpair\tanswer\ttokens");
        for it in &trace.iterations {
            for a in &it.answers {
                let _ = writeln!(out, "{}\t{}\t{}\t{}", it.iteration, a.pair, a.verdict.as_str(), a.tokens_billed);
            }
            for u in &it.unanswered {
                let _ = writeln!(out, "{}\t{}\tunanswered ({})\t{}", it.iteration, u.pair, u.error, u.tokens_billed);
            }
        }
    }
    Ok(out)
}

/// Budget × strategy sweep over synthetic corpora; writes the report CSV.
pub fn cmd_eval(config: &RunConfig) -> Result<EvalReport> {
    let report = run_eval(config)?;
    report
        .write_csv(create(&output_path(config, EVAL_FILE)?)?)
        .map_err(write_err)?;
    Ok(report)
}

/// Writes one synthetic corpus and its planted truth.
pub fn cmd_generate(config: &RunConfig) -> Result<(PathBuf, PathBuf)> {
    config.validate()?;
    let spec = SyntheticSpec {
        entities: config.eval_entities,
        min_duplicates: config.eval_min_duplicates,
        max_duplicates: config.eval_max_duplicates,
        noise: config.eval_noise,
    };
    let (records, truth) = generate_corpus(&spec, config.seed)?;
    let records_path = output_path(config, RECORDS_FILE)?;
    let truth_path = output_path(config, TRUTH_FILE)?;
    write_records(&records, create(&records_path)?)?;
    write_truth(&truth, create(&truth_path)?)?;
    Ok((records_path, truth_path))
}
