use std::collections::HashSet;

use super::trace::{
    AskedQuestion, IterationRecord, RankedPartition, RefinementTrace, StopReason, TraceSummary, Unanswered,
};
use super::update::batch_update;
use crate::error::{Error, Result};
use crate::model::{FactoredDistribution, RecordPair, BITS};
use crate::oracle::{Oracle, OracleAnswer, OracleError, Theta};
use crate::select::{candidate_pairs, Budget, MatchQuestion, Selector};

/// When to stop asking.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopPolicy {
    /// Stop once an iteration lowers entropy by less than this (bits).
    /// Zero disables the test.
    pub min_entropy_drop: f64,
    pub max_iterations: usize,
}

impl Default for StopPolicy {
    fn default() -> Self {
        Self {
            min_entropy_drop: 1e-3,
            max_iterations: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoopConfig {
    pub theta: Theta,
    pub stop: StopPolicy,
    pub questions_per_iteration: usize,
    /// Concurrent oracle calls within one iteration.
    pub parallelism: usize,
    /// Entries listed in the summary.
    pub top_k: usize,
}

impl StopPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.min_entropy_drop >= 0.0 && self.min_entropy_drop.is_finite()) {
            return Err(Error::Config(format!(
                "min_entropy_drop must be a finite number >= 0 (got {})",
                self.min_entropy_drop
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

impl LoopConfig {
    pub fn validate(&self) -> Result<()> {
        self.stop.validate()?;
        if self.questions_per_iteration == 0 || self.parallelism == 0 || self.top_k == 0 {
            return Err(Error::Config(
                "questions_per_iteration, parallelism and top_k must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn new(theta: Theta) -> Self {
        Self {
            theta,
            stop: StopPolicy::default(),
            questions_per_iteration: 1,
            parallelism: 1,
            top_k: 10,
        }
    }
}

/// Select → ask → update until the budget, the candidates, the iteration
/// cap, or the entropy decrease runs out.
///
/// Oracle failures mark single questions unanswered; only an authentication
/// failure aborts the run. Answers are applied in selection order whatever
/// order they arrive in.
pub fn run_loop(
    dist: FactoredDistribution,
    candidates: &[MatchQuestion],
    oracle: &dyn Oracle,
    selector: &mut Selector,
    mut budget: Budget,
    config: &LoopConfig,
) -> Result<(FactoredDistribution, RefinementTrace)> {
    config.validate()?;
    let mut dist = dist;
    let initial_entropy = dist.entropy(BITS)?;
    let mut attempted: HashSet<RecordPair> = HashSet::new();
    let mut iterations = Vec::new();
    let mut billed_total = 0u64;

    let stop_reason = loop {
        if iterations.len() >= config.stop.max_iterations {
            break StopReason::MaxIterations;
        }
        let open: HashSet<RecordPair> = candidate_pairs(&dist).into_iter().collect();
        let pool: Vec<MatchQuestion> = candidates
            .iter()
            .filter(|q| open.contains(&q.pair) && !attempted.contains(&q.pair))
            .cloned()
            .collect();
        if pool.is_empty() {
            break StopReason::CandidatesExhausted;
        }
        let selected = selector.select(&dist, &pool, &budget, config.questions_per_iteration, BITS)?;
        if selected.is_empty() {
            break StopReason::BudgetExhausted;
        }

        let entropy_before = dist.entropy(BITS)?;
        let results = ask_all(oracle, selected.questions(), config.parallelism);
        let mut answers = Vec::new();
        let mut unanswered = Vec::new();
        let mut auth_failure = None;
        for (q, res) in selected.questions().iter().zip(results) {
            attempted.insert(q.pair.clone());
            match res {
                Ok(a) => {
                    billed_total += a.tokens_billed;
                    budget.charge(a.tokens_billed);
                    answers.push(a);
                }
                Err(e) => {
                    billed_total += e.tokens_billed();
                    budget.charge(e.tokens_billed());
                    if matches!(e, OracleError::Authentication(_)) {
                        auth_failure = Some(e.clone());
                    }
                    unanswered.push(Unanswered {
                        pair: q.pair.clone(),
                        error: e.to_string(),
                        tokens_billed: e.tokens_billed(),
                    });
                }
            }
        }
        if let Some(e) = auth_failure {
            return Err(e.into());
        }

        dist = batch_update(&dist, &answers, config.theta)?;
        let entropy_after = dist.entropy(BITS)?;
        let any_answered = !answers.is_empty();
        iterations.push(IterationRecord {
            iteration: iterations.len() + 1,
            questions: selected
                .questions()
                .iter()
                .map(|q| AskedQuestion {
                    pair: q.pair.clone(),
                    cost: q.cost,
                })
                .collect(),
            answers,
            unanswered,
            entropy_before,
            entropy_after,
            budget_spent: budget.spent(),
            tokens_billed: billed_total,
        });
        if any_answered && config.stop.min_entropy_drop > 0.0 && entropy_before - entropy_after < config.stop.min_entropy_drop {
            break StopReason::EntropyConverged;
        }
    };

    let final_entropy = dist.entropy(BITS)?;
    let summary = TraceSummary {
        stop_reason,
        iterations: iterations.len(),
        initial_entropy,
        final_entropy,
        budget_total: budget.total(),
        budget_spent: budget.spent(),
        tokens_billed: billed_total,
        map_partition: dist.map_partition(),
        top_partitions: dist
            .top_k(config.top_k)
            .into_iter()
            .map(|(partition, probability)| RankedPartition {
                partition,
                probability,
            })
            .collect(),
    };
    Ok((
        dist,
        RefinementTrace {
            initial_entropy,
            iterations,
            summary,
        },
    ))
}

/// Asks every question, at most `parallelism` at a time, returning results
/// in question order.
fn ask_all(
    oracle: &dyn Oracle,
    questions: &[MatchQuestion],
    parallelism: usize,
) -> Vec<std::result::Result<OracleAnswer, OracleError>> {
    if parallelism <= 1 || questions.len() <= 1 {
        return questions.iter().map(|q| oracle.ask(q)).collect();
    }
    let mut out = Vec::with_capacity(questions.len());
    for chunk in questions.chunks(parallelism) {
        std::thread::scope(|s| {
            let handles: Vec<_> = chunk.iter().map(|q| s.spawn(move || oracle.ask(q))).collect();
            for h in handles {
                out.push(
                    h.join()
                        .unwrap_or_else(|_| Err(OracleError::Transport("oracle call panicked".into()))),
                );
            }
        });
    }
    out
}
