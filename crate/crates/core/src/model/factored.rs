use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::distribution::PartitionDistribution;
use super::entropy::check_base;
use super::partition::Partition;
use super::record::{RecordId, RecordPair};
use crate::error::{Error, Result};

/// Independent product of partition distributions over disjoint universes.
///
/// The global distribution is never materialized: entropy is the sum of the
/// per-component entropies, and the most probable global partitions are
/// assembled on demand by a best-first search over component rankings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PartitionDistribution>", into = "Vec<PartitionDistribution>")]
pub struct FactoredDistribution {
    components: Vec<PartitionDistribution>,
    component_of: HashMap<RecordId, usize>,
}

impl FactoredDistribution {
    pub fn new(components: Vec<PartitionDistribution>) -> Result<Self> {
        let mut component_of = HashMap::new();
        for (i, c) in components.iter().enumerate() {
            for id in c.universe() {
                if component_of.insert(id.clone(), i).is_some() {
                    return Err(Error::OverlappingUniverses(id.clone()));
                }
            }
        }
        Ok(Self {
            components,
            component_of,
        })
    }

    pub fn components(&self) -> &[PartitionDistribution] {
        &self.components
    }

    pub fn component_of(&self, id: &RecordId) -> Option<usize> {
        self.component_of.get(id).copied()
    }

    /// Sorted universe.
    pub fn universe(&self) -> Vec<RecordId> {
        let mut ids: Vec<RecordId> = self.component_of.keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn contains(&self, id: &RecordId) -> bool {
        self.component_of.contains_key(id)
    }

    /// Component holding both members, `None` when they sit in different
    /// components (and so are never co-clustered).
    pub fn locate(&self, pair: &RecordPair) -> Result<Option<usize>> {
        let a = self
            .component_of(pair.a())
            .ok_or_else(|| Error::MemberNotInUniverse(pair.a().clone()))?;
        let b = self
            .component_of(pair.b())
            .ok_or_else(|| Error::MemberNotInUniverse(pair.b().clone()))?;
        Ok((a == b).then_some(a))
    }

    pub fn pair_probability(&self, pair: &RecordPair) -> Result<f64> {
        match self.locate(pair)? {
            Some(i) => self.components[i].pair_probability(pair),
            None => Ok(0.0),
        }
    }

    /// Sum of component entropies.
    pub fn entropy(&self, base: f64) -> Result<f64> {
        check_base(base)?;
        let mut total = 0.0;
        for c in &self.components {
            total += c.entropy(base)?;
        }
        Ok(total)
    }

    pub fn map_partition(&self) -> Partition {
        let clusters = self
            .components
            .iter()
            .flat_map(|c| c.map_partition().clusters().to_vec())
            .collect();
        Partition::new(clusters).expect("component universes are disjoint")
    }

    /// The `k` most probable global partitions with their probabilities.
    pub fn top_k(&self, k: usize) -> Vec<(Partition, f64)> {
        let ranked: Vec<Vec<(&Partition, f64)>> =
            self.components.iter().map(|c| c.ranked()).collect();
        let prob = |idx: &[usize]| -> f64 {
            idx.iter()
                .zip(&ranked)
                .map(|(&i, r)| r[i].1)
                .product()
        };

        let start = vec![0usize; ranked.len()];
        let mut heap = BinaryHeap::new();
        let mut seen = HashSet::new();
        heap.push(Candidate {
            prob: prob(&start),
            idx: start.clone(),
        });
        seen.insert(start);

        let mut out = Vec::with_capacity(k);
        while out.len() < k {
            let Some(Candidate { prob: p, idx }) = heap.pop() else {
                break;
            };
            let clusters = idx
                .iter()
                .zip(&ranked)
                .flat_map(|(&i, r)| r[i].0.clusters().to_vec())
                .collect();
            out.push((Partition::new(clusters).expect("disjoint"), p));
            for c in 0..idx.len() {
                if idx[c] + 1 < ranked[c].len() {
                    let mut next = idx.clone();
                    next[c] += 1;
                    if seen.insert(next.clone()) {
                        heap.push(Candidate {
                            prob: prob(&next),
                            idx: next,
                        });
                    }
                }
            }
        }
        out
    }

    pub(crate) fn replace_component(&mut self, i: usize, dist: PartitionDistribution) {
        debug_assert_eq!(self.components[i].universe(), dist.universe());
        self.components[i] = dist;
    }
}

impl From<PartitionDistribution> for FactoredDistribution {
    fn from(dist: PartitionDistribution) -> Self {
        Self::new(vec![dist]).expect("single component")
    }
}

impl TryFrom<Vec<PartitionDistribution>> for FactoredDistribution {
    type Error = Error;

    fn try_from(components: Vec<PartitionDistribution>) -> Result<Self> {
        Self::new(components)
    }
}

impl From<FactoredDistribution> for Vec<PartitionDistribution> {
    fn from(f: FactoredDistribution) -> Self {
        f.components
    }
}

struct Candidate {
    prob: f64,
    idx: Vec<usize>,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap on probability; among equals the smaller index vector wins
    fn cmp(&self, other: &Self) -> Ordering {
        self.prob
            .total_cmp(&other.prob)
            .then_with(|| other.idx.cmp(&self.idx))
    }
}
