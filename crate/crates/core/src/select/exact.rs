use super::answers::{AnswerState, Column};
use super::question::{check_candidates, Budget, MatchQuestion, QuestionSet};
use crate::error::{Error, Result};
use crate::model::{check_base, FactoredDistribution, RecordPair};

/// Largest candidate list [`exact_select`] accepts.
pub const EXACT_SELECT_MAX_CANDIDATES: usize = 20;

/// Exhaustive search for the budget-feasible question set with the largest
/// joint answer entropy. Ties go to the cheaper set, then to the set whose
/// sorted pair list is lexicographically smallest.
pub fn exact_select(
    dist: &FactoredDistribution,
    candidates: &[MatchQuestion],
    budget: &Budget,
    base: f64,
) -> Result<QuestionSet> {
    check_base(base)?;
    if candidates.len() > EXACT_SELECT_MAX_CANDIDATES {
        return Err(Error::TooManyCandidates {
            got: candidates.len(),
            max: EXACT_SELECT_MAX_CANDIDATES,
        });
    }
    check_candidates(candidates)?;
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&i, &j| candidates[i].pair.cmp(&candidates[j].pair));
    let columns = order
        .iter()
        .map(|&i| Column::new(dist, &candidates[i].pair))
        .collect::<Result<Vec<_>>>()?;
    let questions: Vec<&MatchQuestion> = order.iter().map(|&i| &candidates[i]).collect();

    let mut search = Search {
        questions: &questions,
        columns: &columns,
        remaining: budget.remaining(),
        best: Best {
            value: 0.0,
            cost: 0,
            picked: Vec::new(),
        },
        current: Vec::new(),
    };
    search.visit(0, AnswerState::new(dist), 0);

    let mut out = QuestionSet::new();
    for i in search.best.picked {
        out.push(questions[i].clone())?;
    }
    Ok(out)
}

struct Best {
    value: f64,
    cost: u64,
    picked: Vec<usize>,
}

struct Search<'s> {
    questions: &'s [&'s MatchQuestion],
    columns: &'s [Column],
    remaining: u64,
    best: Best,
    current: Vec<usize>,
}

impl Search<'_> {
    fn visit(&mut self, next: usize, state: AnswerState<'_>, cost: u64) {
        if next == self.questions.len() {
            self.offer(state.value_nats(), cost);
            return;
        }
        // include
        let q = self.questions[next];
        if cost + q.cost <= self.remaining {
            let mut with = state.clone();
            with.add(&self.columns[next]);
            self.current.push(next);
            self.visit(next + 1, with, cost + q.cost);
            self.current.pop();
        }
        // exclude
        self.visit(next + 1, state, cost);
    }

    fn offer(&mut self, value: f64, cost: u64) {
        let better = match value.total_cmp(&self.best.value) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => {
                cost < self.best.cost
                    || (cost == self.best.cost && self.pairs(&self.current) < self.pairs(&self.best.picked))
            }
        };
        if better {
            self.best = Best {
                value,
                cost,
                picked: self.current.clone(),
            };
        }
    }

    fn pairs(&self, idx: &[usize]) -> Vec<&RecordPair> {
        idx.iter().map(|&i| &self.questions[i].pair).collect()
    }
}
