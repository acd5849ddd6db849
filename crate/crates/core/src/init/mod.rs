//! Builds the initial partition distribution from raw records or imported
//! pair scores.

mod blocking;
mod enumerate;
mod scores;
mod similarity;

use std::collections::BTreeMap;

pub use blocking::{blocking_components, BlockingComponent};
pub use enumerate::{enumerate_partitions, EnumerationLimits};
pub use scores::{aggregate_tools, threshold_filter, PairScore};
pub use similarity::{
    score_pairs, AttributeRule, Calibration, MatcherConfig, SimilarityKind, BASELINE_SOURCE,
};

use crate::error::{Error, Result};
use crate::model::{ensure_unique_ids, FactoredDistribution, PartitionDistribution, Record, RecordPair};

/// Source label for aggregated scores.
pub const AGGREGATE_SOURCE: &str = "aggregate";

#[derive(Debug, Clone, PartialEq)]
pub struct InitConfig {
    pub tau: f64,
    pub default_prob: f64,
    pub limits: EnumerationLimits,
}

impl Default for InitConfig {
    fn default() -> Self {
        Self {
            tau: 0.5,
            default_prob: 0.05,
            limits: EnumerationLimits::default(),
        }
    }
}

/// Independent product of per-component distributions.
pub fn combine_components(components: Vec<PartitionDistribution>) -> Result<FactoredDistribution> {
    FactoredDistribution::new(components)
}

/// Aggregate → threshold → block → enumerate → combine.
pub fn initialize(
    records: &[Record],
    sources: &[Vec<PairScore>],
    config: &InitConfig,
) -> Result<FactoredDistribution> {
    if !(0.0..=1.0).contains(&config.tau) {
        return Err(Error::Config(format!("tau must lie in [0,1] (got {})", config.tau)));
    }
    ensure_unique_ids(records)?;
    let aggregated = aggregate_tools(sources)?;
    let scores: Vec<PairScore> = aggregated
        .iter()
        .map(|(pair, p)| PairScore::new(pair.clone(), *p, AGGREGATE_SOURCE))
        .collect::<Result<_>>()?;
    let kept = threshold_filter(&scores, config.tau);
    let kept_map: BTreeMap<RecordPair, f64> =
        kept.iter().map(|s| (s.pair.clone(), s.probability)).collect();

    let components = blocking_components(records, &kept);
    let dists = components
        .iter()
        .map(|c| enumerate_partitions(c, &kept_map, config.default_prob, config.limits))
        .collect::<Result<Vec<_>>>()?;
    combine_components(dists)
}

/// Largest blocking component produced at threshold `tau`.
pub fn largest_component(records: &[Record], scores: &BTreeMap<RecordPair, f64>, tau: f64) -> usize {
    let kept: Vec<PairScore> = scores
        .iter()
        .filter(|(_, p)| **p >= tau)
        .filter_map(|(pair, p)| PairScore::new(pair.clone(), *p, AGGREGATE_SOURCE).ok())
        .collect();
    blocking_components(records, &kept)
        .iter()
        .map(BlockingComponent::len)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::profile_records;
    use crate::model::BITS;

    #[test]
    fn profiles_initialize() {
        let records = profile_records();
        let cfg = MatcherConfig::for_records(&records, SimilarityKind::EditDistance);
        let scores = score_pairs(&records, &cfg).unwrap();
        let dist = initialize(&records, &[scores], &InitConfig::default()).unwrap();
        assert_eq!(dist.universe().len(), 5);
        assert!(dist.entropy(BITS).unwrap() > 0.0);
        let map = dist.map_partition();
        let r12 = RecordPair::of("r1", "r2").unwrap();
        assert!(map.same_cluster(&r12).unwrap());
    }

    #[test]
    fn single_record() {
        let records = profile_records()[..1].to_vec();
        let dist = initialize(&records, &[vec![]], &InitConfig::default()).unwrap();
        assert_eq!(dist.top_k(10).len(), 1);
        assert_eq!(dist.entropy(BITS).unwrap(), 0.0);
    }
}
