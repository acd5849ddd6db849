use std::cmp::Ordering;

use super::answers::{AnswerState, Column};
use super::question::{check_candidates, Budget, MatchQuestion, QuestionSet};
use crate::error::Result;
use crate::model::{check_base, FactoredDistribution};

/// Largest seed set enumerated before greedy completion.
pub const MAX_SEED_SIZE: usize = 3;

/// Seed size used by [`greedy_select`] for a pool of `eligible` candidates
/// (affordable, positive gain). Full size-3 enumeration is cubic in the
/// pool, so large pools fall back to smaller seeds.
pub fn default_seed_size(eligible: usize) -> usize {
    match eligible {
        0..=16 => 3,
        17..=40 => 2,
        _ => 1,
    }
}

/// Budgeted greedy selection of questions maximizing joint answer entropy.
///
/// Every feasible seed set of up to [`default_seed_size`] questions is
/// completed by the cost-effectiveness greedy (repeatedly add the affordable
/// question with the largest gain per token), and the completion with the
/// largest joint entropy wins. Seed size 0 is the plain cost-effectiveness
/// greedy and seed size 1 subsumes the best single question. Ties go to the
/// cheaper question, then to canonical pair order; between completions, to
/// the one found first.
pub fn greedy_select(
    dist: &FactoredDistribution,
    candidates: &[MatchQuestion],
    budget: &Budget,
    base: f64,
) -> Result<QuestionSet> {
    greedy_select_limited(dist, candidates, budget, None, base)
}

/// [`greedy_select`] with an optional cap on the number of questions.
pub fn greedy_select_limited(
    dist: &FactoredDistribution,
    candidates: &[MatchQuestion],
    budget: &Budget,
    max_questions: Option<usize>,
    base: f64,
) -> Result<QuestionSet> {
    greedy_select_seeded(dist, candidates, budget, max_questions, None, base)
}

/// Greedy selection with an explicit seed size (`None` picks
/// [`default_seed_size`]).
pub fn greedy_select_seeded(
    dist: &FactoredDistribution,
    candidates: &[MatchQuestion],
    budget: &Budget,
    max_questions: Option<usize>,
    seed_size: Option<usize>,
    base: f64,
) -> Result<QuestionSet> {
    check_base(base)?;
    check_candidates(candidates)?;
    let columns = candidates
        .iter()
        .map(|q| Column::new(dist, &q.pair))
        .collect::<Result<Vec<_>>>()?;
    let limit = max_questions.unwrap_or(usize::MAX);
    let remaining = budget.remaining();

    let empty = AnswerState::new(dist);
    // Affordable questions that can change the answer distribution at all.
    let mut eligible: Vec<usize> = (0..candidates.len())
        .filter(|&i| candidates[i].cost <= remaining && empty.gain_nats(&columns[i]) > 0.0)
        .collect();
    eligible.sort_by(|&i, &j| {
        (candidates[i].cost, &candidates[i].pair).cmp(&(candidates[j].cost, &candidates[j].pair))
    });
    let seed_size = seed_size
        .unwrap_or_else(|| default_seed_size(eligible.len()))
        .min(MAX_SEED_SIZE)
        .min(limit);

    let run = Completion {
        candidates,
        columns: &columns,
        eligible: &eligible,
        remaining,
        limit,
    };
    let mut best = run.complete(AnswerState::new(dist), Vec::new(), 0);
    let mut seed = Vec::new();
    run.enumerate(dist, &mut seed, 0, seed_size, &mut best);

    let mut out = QuestionSet::new();
    for i in best.picked {
        out.push(candidates[i].clone())?;
    }
    Ok(out)
}

struct Outcome {
    value: f64,
    picked: Vec<usize>,
}

struct Completion<'a> {
    candidates: &'a [MatchQuestion],
    columns: &'a [Column],
    eligible: &'a [usize],
    remaining: u64,
    limit: usize,
}

impl Completion<'_> {
    /// Visits every feasible seed (as positions in `eligible`, increasing)
    /// of size 1..=max_size and keeps the best completion.
    fn enumerate(
        &self,
        dist: &FactoredDistribution,
        seed: &mut Vec<usize>,
        from: usize,
        max_size: usize,
        best: &mut Outcome,
    ) {
        if seed.len() == max_size {
            return;
        }
        for pos in from..self.eligible.len() {
            seed.push(self.eligible[pos]);
            let cost: u64 = seed.iter().map(|&i| self.candidates[i].cost).sum();
            if cost <= self.remaining {
                let mut state = AnswerState::new(dist);
                for &i in seed.iter() {
                    state.add(&self.columns[i]);
                }
                let outcome = self.complete(state, seed.clone(), cost);
                if outcome.value > best.value {
                    *best = outcome;
                }
                self.enumerate(dist, seed, pos + 1, max_size, best);
            }
            seed.pop();
        }
    }

    /// Cost-effectiveness greedy starting from an already chosen seed.
    fn complete<'d>(&self, mut state: AnswerState<'d>, mut picked: Vec<usize>, mut spent: u64) -> Outcome {
        while picked.len() < self.limit {
            let mut choice: Option<(usize, f64)> = None;
            for &i in self.eligible {
                let q = &self.candidates[i];
                if picked.contains(&i) || spent + q.cost > self.remaining {
                    continue;
                }
                let ratio = state.gain_nats(&self.columns[i]) / q.cost as f64;
                if ratio <= 0.0 {
                    continue;
                }
                let better = match choice {
                    None => true,
                    Some((j, r)) => prefer(ratio, q, r, &self.candidates[j]),
                };
                if better {
                    choice = Some((i, ratio));
                }
            }
            let Some((i, _)) = choice else { break };
            spent += self.candidates[i].cost;
            state.add(&self.columns[i]);
            picked.push(i);
        }
        Outcome {
            value: state.value_nats(),
            picked,
        }
    }
}

/// Whether score `x` for `qx` beats score `y` for `qy` under canonical
/// tie-breaking.
fn prefer(x: f64, qx: &MatchQuestion, y: f64, qy: &MatchQuestion) -> bool {
    match x.total_cmp(&y) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (qx.cost, &qx.pair) < (qy.cost, &qy.pair),
    }
}
