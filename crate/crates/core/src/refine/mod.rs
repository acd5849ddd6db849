//! Bayesian refinement of the partition distribution from oracle answers.

mod run;
mod trace;
mod update;

pub use run::{run_loop, LoopConfig, StopPolicy};
pub use trace::{
    AskedQuestion, IterationRecord, RankedPartition, RefinementTrace, StopReason, TraceSummary, Unanswered,
};
pub use update::{apply_answer, batch_update, map_partition, posterior_update};
