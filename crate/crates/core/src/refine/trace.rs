use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::model::{Partition, RecordPair};
use crate::oracle::OracleAnswer;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    BudgetExhausted,
    EntropyConverged,
    CandidatesExhausted,
    MaxIterations,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AskedQuestion {
    pub pair: RecordPair,
    pub cost: u64,
}

/// A question the oracle failed to answer; its pair is left unrefined.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unanswered {
    pub pair: RecordPair,
    pub error: String,
    pub tokens_billed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub questions: Vec<AskedQuestion>,
    pub answers: Vec<OracleAnswer>,
    pub unanswered: Vec<Unanswered>,
    pub entropy_before: f64,
    pub entropy_after: f64,
    /// Cumulative budget debit, never above the budget total.
    pub budget_spent: u64,
    /// Cumulative tokens billed by the oracle, including any overrun.
    pub tokens_billed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedPartition {
    pub partition: Partition,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub stop_reason: StopReason,
    pub iterations: usize,
    pub initial_entropy: f64,
    pub final_entropy: f64,
    pub budget_total: u64,
    pub budget_spent: u64,
    pub tokens_billed: u64,
    pub map_partition: Partition,
    pub top_partitions: Vec<RankedPartition>,
}

/// Log of one refinement run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementTrace {
    pub initial_entropy: f64,
    pub iterations: Vec<IterationRecord>,
    pub summary: TraceSummary,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum TraceLine<'a> {
    Start { initial_entropy: f64 },
    Iteration(std::borrow::Cow<'a, IterationRecord>),
    Summary(std::borrow::Cow<'a, TraceSummary>),
}

impl RefinementTrace {
    /// One JSON object per line: a start line, one line per iteration, and a
    /// closing summary.
    pub fn write_jsonl(&self, mut out: impl Write) -> std::io::Result<()> {
        let mut line = |l: &TraceLine<'_>| -> std::io::Result<()> {
            serde_json::to_writer(&mut out, l)?;
            out.write_all(b"\n")
        };
        line(&TraceLine::Start {
            initial_entropy: self.initial_entropy,
        })?;
        for it in &self.iterations {
            line(&TraceLine::Iteration(std::borrow::Cow::Borrowed(it)))?;
        }
        line(&TraceLine::Summary(std::borrow::Cow::Borrowed(&self.summary)))
    }

    pub fn read_jsonl(input: impl std::io::BufRead) -> std::io::Result<Self> {
        let bad = |m: String| std::io::Error::new(std::io::ErrorKind::InvalidData, m);
        let mut initial = None;
        let mut iterations = Vec::new();
        let mut summary = None;
        for line in input.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<TraceLine<'static>>(&line).map_err(|e| bad(e.to_string()))? {
                TraceLine::Start { initial_entropy } => initial = Some(initial_entropy),
                TraceLine::Iteration(it) => iterations.push(it.into_owned()),
                TraceLine::Summary(s) => summary = Some(s.into_owned()),
            }
        }
        Ok(Self {
            initial_entropy: initial.ok_or_else(|| bad("trace has no start line".into()))?,
            iterations,
            summary: summary.ok_or_else(|| bad("trace has no summary line".into()))?,
        })
    }

    /// `(cumulative_tokens, entropy_bits)` rows, starting at zero tokens.
    pub fn entropy_curve(&self) -> Vec<(u64, f64)> {
        std::iter::once((0, self.initial_entropy))
            .chain(self.iterations.iter().map(|it| (it.tokens_billed, it.entropy_after)))
            .collect()
    }

    pub fn write_curve_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["cumulative_tokens", "entropy_bits"])?;
        for (tokens, h) in self.entropy_curve() {
            w.write_record([tokens.to_string(), h.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
