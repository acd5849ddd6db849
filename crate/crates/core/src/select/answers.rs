//! Joint answer entropy under the noiseless answer model.
//!
//! A question set maps every partition to an answer vector; the joint answer
//! entropy is the entropy of the induced distribution over answer vectors.
//! Components are independent, so each keeps its own grouping of entries
//! into answer classes and the totals add up.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{check_base, entropy_nats, FactoredDistribution, RecordPair};

/// Answer of one question on every entry of its component.
#[derive(Debug, Clone)]
pub(crate) struct Column {
    /// `None` when the pair straddles two components: the answer is then
    /// "no match" on every partition and carries no information.
    component: Option<usize>,
    bits: Vec<bool>,
}

impl Column {
    pub(crate) fn new(dist: &FactoredDistribution, pair: &RecordPair) -> Result<Self> {
        let component = dist.locate(pair).map_err(|_| Error::PairOutsideUniverse(pair.clone()))?;
        let bits = match component {
            Some(c) => dist.components()[c]
                .entries()
                .iter()
                .map(|(p, _)| p.same_cluster(pair))
                .collect::<Result<_>>()?,
            None => Vec::new(),
        };
        Ok(Self { component, bits })
    }
}

#[derive(Debug, Clone)]
struct Grouping {
    class_of: Vec<usize>,
    classes: usize,
}

/// Incremental state of a growing question set.
#[derive(Debug, Clone)]
pub(crate) struct AnswerState<'a> {
    dist: &'a FactoredDistribution,
    groupings: HashMap<usize, Grouping>,
}

fn split_term(part: f64, whole: f64) -> f64 {
    if part > 0.0 {
        -part * (part / whole).ln()
    } else {
        0.0
    }
}

impl<'a> AnswerState<'a> {
    pub(crate) fn new(dist: &'a FactoredDistribution) -> Self {
        Self {
            dist,
            groupings: HashMap::new(),
        }
    }

    fn probs(&self, component: usize) -> impl Iterator<Item = f64> + 'a {
        self.dist.components()[component].probabilities()
    }

    /// Increase of joint entropy (nats) from adding `col`.
    ///
    /// Computed as the mass-weighted binary entropy of how `col` splits each
    /// existing answer class; every term is non-negative.
    pub(crate) fn gain_nats(&self, col: &Column) -> f64 {
        let Some(c) = col.component else {
            return 0.0;
        };
        let (class_of, classes) = match self.groupings.get(&c) {
            Some(g) => (Some(&g.class_of), g.classes),
            None => (None, 1),
        };
        let mut mass = vec![[0.0f64; 2]; classes];
        for (i, p) in self.probs(c).enumerate() {
            let k = class_of.map_or(0, |v| v[i]);
            mass[k][col.bits[i] as usize] += p;
        }
        mass.iter()
            .map(|[m0, m1]| {
                let whole = m0 + m1;
                split_term(*m0, whole) + split_term(*m1, whole)
            })
            .sum()
    }

    pub(crate) fn add(&mut self, col: &Column) {
        let Some(c) = col.component else {
            return;
        };
        let n = col.bits.len();
        let g = self.groupings.entry(c).or_insert_with(|| Grouping {
            class_of: vec![0; n],
            classes: 1,
        });
        let mut relabel: HashMap<(usize, bool), usize> = HashMap::new();
        for (k, &bit) in g.class_of.iter_mut().zip(&col.bits) {
            let next = relabel.len();
            *k = *relabel.entry((*k, bit)).or_insert(next);
        }
        g.classes = relabel.len();
    }

    /// Joint answer entropy (nats) of the questions added so far.
    pub(crate) fn value_nats(&self) -> f64 {
        let mut comps: Vec<_> = self.groupings.iter().collect();
        comps.sort_by_key(|(c, _)| **c);
        comps
            .into_iter()
            .map(|(&c, g)| {
                let mut mass = vec![0.0; g.classes];
                for (i, p) in self.probs(c).enumerate() {
                    mass[g.class_of[i]] += p;
                }
                entropy_nats(mass)
            })
            .sum()
    }
}

/// Entropy of the answer vector of `pairs` under `dist`.
pub fn joint_answer_entropy(dist: &FactoredDistribution, pairs: &[RecordPair], base: f64) -> Result<f64> {
    let ln_base = check_base(base)?;
    let mut state = AnswerState::new(dist);
    for pair in pairs {
        state.add(&Column::new(dist, pair)?);
    }
    Ok(state.value_nats() / ln_base)
}

/// Entropy increase from asking `candidate` on top of `chosen`.
pub fn marginal_gain(
    dist: &FactoredDistribution,
    chosen: &[RecordPair],
    candidate: &RecordPair,
    base: f64,
) -> Result<f64> {
    let ln_base = check_base(base)?;
    if chosen.contains(candidate) {
        return Err(Error::DuplicateCandidate(candidate.clone()));
    }
    let mut state = AnswerState::new(dist);
    for pair in chosen {
        state.add(&Column::new(dist, pair)?);
    }
    Ok(state.gain_nats(&Column::new(dist, candidate)?) / ln_base)
}

/// Pairs whose answer is not yet determined: co-clustered in some but not
/// all positive-probability partitions of their component. Canonical order.
pub fn candidate_pairs(dist: &FactoredDistribution) -> Vec<RecordPair> {
    let mut out = Vec::new();
    for comp in dist.components() {
        let support: Vec<_> = comp.entries().iter().filter(|(_, p)| *p > 0.0).collect();
        let members = comp.universe();
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let pair = RecordPair::new(members[i].clone(), members[j].clone()).expect("distinct");
                let mut seen = [false; 2];
                for (partition, _) in &support {
                    seen[partition.same_cluster(&pair).expect("in universe") as usize] = true;
                }
                if seen[0] && seen[1] {
                    out.push(pair);
                }
            }
        }
    }
    out.sort();
    out
}
