use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::entropy::shannon_entropy;
use super::partition::Partition;
use super::record::{RecordId, RecordPair};
use crate::error::{Error, Result};

/// Tolerance on the sum-to-one invariant.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A normalized probability distribution over partitions of one universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionRepr", into = "DistributionRepr")]
pub struct PartitionDistribution {
    universe: Vec<RecordId>,
    entries: Vec<(Partition, f64)>,
}

#[derive(Serialize, Deserialize)]
struct DistributionRepr {
    universe: Vec<RecordId>,
    entries: Vec<EntryRepr>,
}

#[derive(Serialize, Deserialize)]
struct EntryRepr {
    partition: Partition,
    probability: f64,
}

impl TryFrom<DistributionRepr> for PartitionDistribution {
    type Error = Error;

    fn try_from(repr: DistributionRepr) -> Result<Self> {
        let dist = Self::new(
            repr.entries
                .into_iter()
                .map(|e| (e.partition, e.probability))
                .collect(),
        )?;
        let mut universe = repr.universe;
        universe.sort();
        if universe != dist.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(dist)
    }
}

impl From<PartitionDistribution> for DistributionRepr {
    fn from(d: PartitionDistribution) -> Self {
        DistributionRepr {
            universe: d.universe,
            entries: d
                .entries
                .into_iter()
                .map(|(partition, probability)| EntryRepr {
                    partition,
                    probability,
                })
                .collect(),
        }
    }
}

/// Divides every weight by the total.
pub fn normalize(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if let Some(&w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidProbability(w));
    }
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(Error::AllZeroWeights);
    }
    Ok(weights.iter().map(|w| w / total).collect())
}

impl PartitionDistribution {
    /// Builds a distribution from probabilities that already sum to one.
    pub fn new(entries: Vec<(Partition, f64)>) -> Result<Self> {
        let universe = validate_entries(&entries)?;
        let total: f64 = entries.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Unnormalized(total));
        }
        Ok(Self { universe, entries })
    }

    /// Builds a distribution from non-negative weights, normalizing them.
    pub fn from_weights(entries: Vec<(Partition, f64)>) -> Result<Self> {
        let universe = validate_entries(&entries)?;
        let weights: Vec<f64> = entries.iter().map(|(_, w)| *w).collect();
        let probs = normalize(&weights)?;
        let entries = entries
            .into_iter()
            .zip(probs)
            .map(|((p, _), w)| (p, w))
            .collect();
        Ok(Self { universe, entries })
    }

    /// The one-partition distribution used for universes of zero or one
    /// record, or whenever nothing is uncertain.
    pub fn certain(partition: Partition) -> Self {
        Self {
            universe: partition.universe(),
            entries: vec![(partition, 1.0)],
        }
    }

    pub fn universe(&self) -> &[RecordId] {
        &self.universe
    }

    pub fn entries(&self) -> &[(Partition, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, id: &RecordId) -> bool {
        self.universe.binary_search(id).is_ok()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|(_, p)| *p)
    }

    pub(crate) fn check_pair(&self, pair: &RecordPair) -> Result<()> {
        for id in [pair.a(), pair.b()] {
            if !self.contains(id) {
                return Err(Error::MemberNotInUniverse(id.clone()));
            }
        }
        Ok(())
    }

    /// Marginal probability that the pair is co-clustered.
    pub fn pair_probability(&self, pair: &RecordPair) -> Result<f64> {
        self.check_pair(pair)?;
        let mut total = 0.0;
        for (partition, p) in &self.entries {
            if partition.same_cluster(pair)? {
                total += p;
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }

    pub fn entropy(&self, base: f64) -> Result<f64> {
        shannon_entropy(self.probabilities(), base)
    }

    /// Highest-probability partition; ties go to the canonically smallest.
    pub fn map_partition(&self) -> &Partition {
        self.ranked()[0].0
    }

    /// Entries sorted by probability (descending), then canonical order.
    pub fn ranked(&self) -> Vec<(&Partition, f64)> {
        let mut v: Vec<(&Partition, f64)> = self.entries.iter().map(|(q, p)| (q, *p)).collect();
        v.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(y.0)));
        v
    }

    /// Drops entries below `epsilon`, keeps at most `max_entries` of the most
    /// probable ones, and renormalizes. Survivors keep their relative order.
    pub fn prune(&self, epsilon: f64, max_entries: usize) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::InvalidProbability(epsilon));
        }
        if max_entries == 0 {
            return Err(Error::PruneEmptied);
        }
        let mut order: Vec<usize> = (0..self.entries.len())
            .filter(|&i| self.entries[i].1 >= epsilon)
            .collect();
        if order.len() == self.entries.len() && order.len() <= max_entries {
            return Ok(self.clone());
        }
        order.sort_by(|&i, &j| {
            let (pi, wi) = &self.entries[i];
            let (pj, wj) = &self.entries[j];
            wj.total_cmp(wi).then_with(|| pi.cmp(pj))
        });
        order.truncate(max_entries);
        order.sort_unstable();
        let kept: Vec<(Partition, f64)> = order.iter().map(|&i| self.entries[i].clone()).collect();
        if kept.iter().all(|(_, w)| *w <= 0.0) {
            return Err(Error::PruneEmptied);
        }
        Self::from_weights(kept)
    }

    /// Replaces probabilities with new weights (same entry order) and
    /// renormalizes.
    pub(crate) fn reweighted(&self, weights: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(weights.len(), self.entries.len());
        let probs = normalize(&weights)?;
        Ok(Self {
            universe: self.universe.clone(),
            entries: self
                .entries
                .iter()
                .zip(probs)
                .map(|((q, _), p)| (q.clone(), p))
                .collect(),
        })
    }
}

fn validate_entries(entries: &[(Partition, f64)]) -> Result<Vec<RecordId>> {
    let (first, _) = entries.first().ok_or(Error::EmptyDistribution)?;
    let universe = first.universe();
    let mut seen = HashSet::with_capacity(entries.len());
    for (partition, p) in entries {
        if !p.is_finite() || *p < 0.0 {
            return Err(Error::InvalidProbability(*p));
        }
        if partition.len() != universe.len()
            || universe.iter().any(|id| !partition.contains(id))
        {
            return Err(Error::UniverseMismatch);
        }
        if !seen.insert(partition) {
            return Err(Error::DuplicatePartition);
        }
    }
    Ok(universe)
}
