use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::record::{RecordId, RecordPair};
use crate::error::{Error, Result};

/// A set partition of a record universe.
///
/// Stored canonically: every cluster is sorted and the cluster list is sorted,
/// so structural equality is partition equality and `Ord` gives the canonical
/// tie-breaking order used throughout the crate.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<RecordId>>", into = "Vec<Vec<RecordId>>")]
pub struct Partition {
    clusters: Vec<Vec<RecordId>>,
    cluster_of: HashMap<RecordId, usize>,
}

impl Partition {
    /// Builds a partition whose universe is the union of `clusters`.
    pub fn new(clusters: Vec<Vec<RecordId>>) -> Result<Self> {
        let mut clusters = clusters;
        for c in clusters.iter_mut() {
            if c.is_empty() {
                return Err(Error::InvalidPartition("empty cluster".into()));
            }
            c.sort();
        }
        clusters.sort();
        let mut cluster_of = HashMap::new();
        for (i, c) in clusters.iter().enumerate() {
            for id in c {
                if cluster_of.insert(id.clone(), i).is_some() {
                    return Err(Error::InvalidPartition(format!(
                        "record {id} appears in more than one cluster"
                    )));
                }
            }
        }
        Ok(Self {
            clusters,
            cluster_of,
        })
    }

    /// Builds a partition and checks that it covers exactly `universe`.
    pub fn with_universe(universe: &[RecordId], clusters: Vec<Vec<RecordId>>) -> Result<Self> {
        let p = Self::new(clusters)?;
        if p.len() != universe.len() || universe.iter().any(|id| !p.contains(id)) {
            return Err(Error::InvalidPartition(
                "clusters do not cover the universe exactly".into(),
            ));
        }
        Ok(p)
    }

    pub fn singletons<'a>(ids: impl IntoIterator<Item = &'a RecordId>) -> Result<Self> {
        Self::new(ids.into_iter().map(|id| vec![id.clone()]).collect())
    }

    pub fn clusters(&self) -> &[Vec<RecordId>] {
        &self.clusters
    }

    /// Number of records in the universe.
    pub fn len(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster_of.is_empty()
    }

    pub fn contains(&self, id: &RecordId) -> bool {
        self.cluster_of.contains_key(id)
    }

    /// Sorted universe.
    pub fn universe(&self) -> Vec<RecordId> {
        let mut ids: Vec<RecordId> = self.cluster_of.keys().cloned().collect();
        ids.sort();
        ids
    }

    pub fn cluster_index(&self, id: &RecordId) -> Option<usize> {
        self.cluster_of.get(id).copied()
    }

    /// Whether both members of `pair` lie in the same cluster.
    pub fn same_cluster(&self, pair: &RecordPair) -> Result<bool> {
        let a = self
            .cluster_index(pair.a())
            .ok_or_else(|| Error::MemberNotInUniverse(pair.a().clone()))?;
        let b = self
            .cluster_index(pair.b())
            .ok_or_else(|| Error::MemberNotInUniverse(pair.b().clone()))?;
        Ok(a == b)
    }

    /// All co-clustered pairs, in canonical order.
    pub fn matched_pairs(&self) -> Vec<RecordPair> {
        let mut out = Vec::new();
        for c in &self.clusters {
            for i in 0..c.len() {
                for j in i + 1..c.len() {
                    out.push(RecordPair::new(c[i].clone(), c[j].clone()).expect("distinct ids"));
                }
            }
        }
        out.sort();
        out
    }

    /// Disjoint union of two partitions.
    pub fn union(&self, other: &Partition) -> Result<Partition> {
        let mut clusters = self.clusters.clone();
        clusters.extend(other.clusters.iter().cloned());
        Partition::new(clusters)
    }
}

impl TryFrom<Vec<Vec<RecordId>>> for Partition {
    type Error = Error;

    fn try_from(clusters: Vec<Vec<RecordId>>) -> Result<Self> {
        Self::new(clusters)
    }
}

impl From<Partition> for Vec<Vec<RecordId>> {
    fn from(p: Partition) -> Self {
        p.clusters
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.clusters == other.clusters
    }
}

impl Eq for Partition {}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.clusters.cmp(&other.clusters)
    }
}

impl std::hash::Hash for Partition {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.clusters.hash(state);
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

/// Renders as `{r1,r2} {r3}`.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.clusters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str("{")?;
            for (j, id) in c.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                f.write_str(id.as_str())?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}
