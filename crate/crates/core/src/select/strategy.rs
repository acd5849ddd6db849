use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::greedy::greedy_select_limited;
use super::question::{Budget, MatchQuestion, QuestionSet};
use crate::error::Result;
use crate::model::FactoredDistribution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// Budgeted greedy on joint answer entropy.
    Greedy,
    /// Uniformly random affordable questions.
    Random,
    /// Questions whose match probability is closest to one half.
    MaxUncertainty,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [
        StrategyKind::Greedy,
        StrategyKind::Random,
        StrategyKind::MaxUncertainty,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Greedy => "greedy",
            StrategyKind::Random => "random",
            StrategyKind::MaxUncertainty => "max-uncertainty",
        }
    }
}

impl std::str::FromStr for StrategyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown strategy {s:?}"))
    }
}

/// Question selection policy used by the refinement loop.
#[derive(Debug, Clone)]
pub enum Selector {
    Greedy,
    Random(ChaCha8Rng),
    MaxUncertainty,
}

impl Selector {
    pub fn new(kind: StrategyKind, seed: u64) -> Self {
        match kind {
            StrategyKind::Greedy => Selector::Greedy,
            StrategyKind::Random => Selector::Random(ChaCha8Rng::seed_from_u64(seed)),
            StrategyKind::MaxUncertainty => Selector::MaxUncertainty,
        }
    }

    pub fn select(
        &mut self,
        dist: &FactoredDistribution,
        candidates: &[MatchQuestion],
        budget: &Budget,
        max_questions: usize,
        base: f64,
    ) -> Result<QuestionSet> {
        match self {
            Selector::Greedy => greedy_select_limited(dist, candidates, budget, Some(max_questions), base),
            Selector::Random(rng) => {
                let mut order: Vec<&MatchQuestion> = candidates.iter().collect();
                order.shuffle(rng);
                fill(order, budget, max_questions)
            }
            Selector::MaxUncertainty => {
                let mut scored = candidates
                    .iter()
                    .map(|q| Ok((q, (dist.pair_probability(&q.pair)? - 0.5).abs())))
                    .collect::<Result<Vec<_>>>()?;
                scored.sort_by(|(qa, da), (qb, db)| {
                    da.partial_cmp(db)
                        .unwrap_or(Ordering::Equal)
                        .then_with(|| qa.cost.cmp(&qb.cost))
                        .then_with(|| qa.pair.cmp(&qb.pair))
                });
                fill(scored.into_iter().map(|(q, _)| q).collect(), budget, max_questions)
            }
        }
    }
}

fn fill(order: Vec<&MatchQuestion>, budget: &Budget, max_questions: usize) -> Result<QuestionSet> {
    let mut out = QuestionSet::new();
    let mut left = budget.remaining();
    for q in order {
        if out.len() >= max_questions {
            break;
        }
        if q.cost <= left && !out.contains(&q.pair) {
            left -= q.cost;
            out.push(q.clone())?;
        }
    }
    Ok(out)
}
