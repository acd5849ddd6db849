use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::cost::CostModel;
use super::prompt::{PromptTemplate, RecordIndex};
use crate::error::{Error, Result};
use crate::model::{Record, RecordPair};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchQuestion {
    pub pair: RecordPair,
    pub prompt: String,
    /// Estimated tokens: prompt plus answer allowance.
    pub cost: u64,
}

impl MatchQuestion {
    pub fn new(pair: RecordPair, prompt: String, model: &CostModel) -> Self {
        let cost = model.question_cost(&prompt);
        Self { pair, prompt, cost }
    }
}

/// Renders and prices one question per pair.
pub fn build_questions(
    pairs: &[RecordPair],
    records: &[Record],
    template: &PromptTemplate,
    model: &CostModel,
) -> Result<Vec<MatchQuestion>> {
    let index = RecordIndex::new(records);
    pairs
        .iter()
        .map(|pair| {
            let prompt = template.render(pair, &index)?;
            Ok(MatchQuestion::new(pair.clone(), prompt, model))
        })
        .collect()
}

/// Ordered set of questions with distinct pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuestionSet {
    questions: Vec<MatchQuestion>,
    total_cost: u64,
}

impl QuestionSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, q: MatchQuestion) -> Result<()> {
        if self.contains(&q.pair) {
            return Err(Error::DuplicateCandidate(q.pair));
        }
        self.total_cost += q.cost;
        self.questions.push(q);
        Ok(())
    }

    pub fn contains(&self, pair: &RecordPair) -> bool {
        self.questions.iter().any(|q| &q.pair == pair)
    }

    pub fn questions(&self) -> &[MatchQuestion] {
        &self.questions
    }

    pub fn pairs(&self) -> Vec<RecordPair> {
        self.questions.iter().map(|q| q.pair.clone()).collect()
    }

    pub fn total_cost(&self) -> u64 {
        self.total_cost
    }

    pub fn len(&self) -> usize {
        self.questions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.questions.is_empty()
    }
}

impl TryFrom<Vec<MatchQuestion>> for QuestionSet {
    type Error = Error;

    fn try_from(qs: Vec<MatchQuestion>) -> Result<Self> {
        let mut set = QuestionSet::new();
        for q in qs {
            set.push(q)?;
        }
        Ok(set)
    }
}

/// Token allowance for oracle interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    total: u64,
    spent: u64,
}

impl Budget {
    pub fn new(total: u64) -> Self {
        Self { total, spent: 0 }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn remaining(&self) -> u64 {
        self.total - self.spent
    }

    /// Debits `tokens`; anything beyond the total is clipped and returned as
    /// the overrun so callers can account for it separately.
    pub fn charge(&mut self, tokens: u64) -> u64 {
        let take = tokens.min(self.remaining());
        self.spent += take;
        tokens - take
    }
}

pub(crate) fn check_candidates(candidates: &[MatchQuestion]) -> Result<()> {
    let mut seen = HashSet::with_capacity(candidates.len());
    for q in candidates {
        if q.cost == 0 {
            return Err(Error::NonPositiveCost(q.pair.clone()));
        }
        if !seen.insert(&q.pair) {
            return Err(Error::DuplicateCandidate(q.pair.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_charge_clips() {
        let mut b = Budget::new(100);
        assert_eq!(b.charge(60), 0);
        assert_eq!(b.charge(50), 10);
        assert_eq!(b.spent(), 100);
        assert_eq!(b.remaining(), 0);
    }

    #[test]
    fn question_set_rejects_duplicates() {
        let m = CostModel::default();
        let q = MatchQuestion::new(RecordPair::of("a", "b").unwrap(), "x".into(), &m);
        let mut s = QuestionSet::new();
        s.push(q.clone()).unwrap();
        assert!(s.push(q).is_err());
        assert_eq!(s.total_cost(), 6);
    }
}
