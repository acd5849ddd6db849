use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::RecordPair;

/// Match probability for one pair as reported by one matcher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairScore {
    pub pair: RecordPair,
    pub probability: f64,
    pub source: String,
}

impl PairScore {
    pub fn new(pair: RecordPair, probability: f64, source: impl Into<String>) -> Result<Self> {
        if !(0.0..=1.0).contains(&probability) {
            return Err(Error::InvalidProbability(probability));
        }
        Ok(Self {
            pair,
            probability,
            source: source.into(),
        })
    }
}

/// Keeps the scores with probability at least `tau`.
pub fn threshold_filter(scores: &[PairScore], tau: f64) -> Vec<PairScore> {
    scores
        .iter()
        .filter(|s| s.probability >= tau)
        .cloned()
        .collect()
}

/// Averages per-pair probabilities over the sources that scored the pair.
///
/// Values are summed in sorted order so the result does not depend on the
/// order the sources were supplied in.
pub fn aggregate_tools(sources: &[Vec<PairScore>]) -> Result<BTreeMap<RecordPair, f64>> {
    if sources.is_empty() {
        return Err(Error::EmptySourceList);
    }
    let mut seen = HashSet::new();
    let mut collected: BTreeMap<RecordPair, Vec<f64>> = BTreeMap::new();
    for list in sources {
        for s in list {
            if !seen.insert((s.pair.clone(), s.source.clone())) {
                return Err(Error::DuplicateScore {
                    pair: s.pair.clone(),
                    source_label: s.source.clone(),
                });
            }
            collected
                .entry(s.pair.clone())
                .or_default()
                .push(s.probability);
        }
    }
    Ok(collected
        .into_iter()
        .map(|(pair, mut values)| {
            values.sort_by(f64::total_cmp);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            (pair, mean)
        })
        .collect())
}
