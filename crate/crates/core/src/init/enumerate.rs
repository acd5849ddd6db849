use std::collections::BTreeMap;

use super::blocking::BlockingComponent;
use crate::error::{Error, Result};
use crate::model::{Partition, PartitionDistribution, RecordId, RecordPair};

/// Bounds on partition enumeration inside one blocking component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumerationLimits {
    /// Largest component that may be enumerated (Bell(8) = 4140 partitions).
    pub max_component_size: usize,
    /// Entries kept per component after enumeration.
    pub max_entries: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        Self {
            max_component_size: 8,
            max_entries: 64,
        }
    }
}

/// Distribution over all set partitions of the component, weighting each by
/// the product over member pairs of `p` (co-clustered) or `1 - p` (split).
/// Pairs missing from `scores` use `default_prob`. Zero-weight partitions are
/// dropped and the result is pruned to `limits.max_entries`.
pub fn enumerate_partitions(
    component: &BlockingComponent,
    scores: &BTreeMap<RecordPair, f64>,
    default_prob: f64,
    limits: EnumerationLimits,
) -> Result<PartitionDistribution> {
    if !(default_prob > 0.0 && default_prob < 1.0) {
        return Err(Error::DefaultProbOutOfRange(default_prob));
    }
    let n = component.members.len();
    if n > limits.max_component_size {
        return Err(Error::ComponentTooLarge {
            size: n,
            cap: limits.max_component_size,
        });
    }
    if n <= 1 {
        return Ok(PartitionDistribution::certain(Partition::singletons(
            &component.members,
        )?));
    }

    // Pair probabilities by member index.
    let mut prob = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let pair = RecordPair::new(component.members[i].clone(), component.members[j].clone())?;
            let p = scores.get(&pair).copied().unwrap_or(default_prob);
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
            prob[i][j] = p;
        }
    }

    let mut entries = Vec::new();
    for_each_restricted_growth(n, |labels| {
        let mut w = 1.0;
        for i in 0..n {
            for j in i + 1..n {
                w *= if labels[i] == labels[j] {
                    prob[i][j]
                } else {
                    1.0 - prob[i][j]
                };
            }
        }
        if w > 0.0 {
            entries.push((labels_to_partition(&component.members, labels), w));
        }
    });
    if entries.is_empty() {
        return Err(Error::AllZeroWeights);
    }
    PartitionDistribution::from_weights(entries)?.prune(0.0, limits.max_entries)
}

/// Visits every restricted growth string of length `n`
/// (`a[0] = 0`, `a[i] <= 1 + max(a[..i])`), i.e. every set partition once.
fn for_each_restricted_growth(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut labels = vec![0usize; n];
    let mut maxes = vec![0usize; n];
    loop {
        visit(&labels);
        // advance: rightmost position that can still be incremented
        let mut i = n - 1;
        loop {
            if i == 0 {
                return;
            }
            if labels[i] <= maxes[i - 1] {
                labels[i] += 1;
                maxes[i] = maxes[i - 1].max(labels[i]);
                for k in i + 1..n {
                    labels[k] = 0;
                    maxes[k] = maxes[i];
                }
                break;
            }
            i -= 1;
        }
    }
}

fn labels_to_partition(members: &[RecordId], labels: &[usize]) -> Partition {
    let blocks = labels.iter().max().map_or(0, |m| m + 1);
    let mut clusters = vec![Vec::new(); blocks];
    for (id, &l) in members.iter().zip(labels) {
        clusters[l].push(id.clone());
    }
    Partition::new(clusters).expect("labels define a partition")
}
