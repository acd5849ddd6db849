//! Command-line front end: configuration, file formats, the pipeline
//! commands and the evaluation harness.

mod commands;
mod config;
mod eval;
mod io;
mod synth;

use std::path::Path;

pub use commands::{
    cmd_eval, cmd_generate, cmd_init, cmd_report, cmd_resolve, load_distribution, InitOutcome, ResolveOutcome,
    CURVE_FILE, DISTRIBUTION_FILE, EVAL_FILE, RECORDS_FILE, THETA_WARNING, TOP_K_FILE, TRACE_FILE, TRUTH_FILE,
};
pub use config::{ConfigOverrides, OracleChoice, RunConfig, DEFAULT_THETA};
pub use eval::{
    initialize_escalating, pairwise_f1, run_eval, EvalReport, EvalRow, PairwiseScores, RunOutcome, Scenario, Stat,
};
pub use io::{
    load_pair_scores, load_records, read_labeled_pairs, read_pair_scores, read_records, read_truth, write_records,
    write_top_k, write_truth,
};
pub use synth::{generate_corpus, SyntheticSpec, SYNTHETIC_ATTRIBUTES};

use crate::error::{Error, Result};
use crate::select::PromptTemplate;

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn load_template(config: &RunConfig) -> Result<PromptTemplate> {
    match &config.template {
        Some(path) => PromptTemplate::parse(&read_text(path)?),
        None => Ok(PromptTemplate::default()),
    }
}

/// Process exit status: 1 configuration, 2 input, 3 oracle transport.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Oracle(_) => 3,
        Error::MissingIdColumn
        | Error::MalformedInput(_)
        | Error::Io(_)
        | Error::EmptyRecordId
        | Error::DuplicateRecordId(_)
        | Error::DuplicateAttribute { .. }
        | Error::UnknownRecordId(_)
        | Error::DuplicateScore { .. }
        | Error::InvalidProbability(_)
        | Error::SelfPair(_)
        | Error::ComponentTooLarge { .. }
        | Error::MalformedTemplate(_) => 2,
        _ => 1,
    }
}
