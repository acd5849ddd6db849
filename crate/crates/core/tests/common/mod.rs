//! Random instance generators shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use er_refine::model::{Partition, PartitionDistribution, RecordId, RecordPair};
use er_refine::select::MatchQuestion;

pub fn ids(n: usize) -> Vec<RecordId> {
    (0..n).map(|i| RecordId::new(format!("r{i}")).unwrap()).collect()
}

pub fn all_pairs(members: &[RecordId]) -> Vec<RecordPair> {
    let mut out = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            out.push(RecordPair::new(members[i].clone(), members[j].clone()).unwrap());
        }
    }
    out
}

/// Partition from an arbitrary block labelling.
pub fn from_labels(members: &[RecordId], labels: &[usize]) -> Partition {
    let mut blocks: Vec<Vec<RecordId>> = vec![Vec::new(); members.len()];
    for (id, &l) in members.iter().zip(labels) {
        blocks[l].push(id.clone());
    }
    Partition::new(blocks.into_iter().filter(|b| !b.is_empty()).collect()).unwrap()
}

/// Random distribution over at most `max_entries` distinct partitions of
/// `n` records.
pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize, max_entries: usize) -> PartitionDistribution {
    let members = ids(n);
    let target = rng.gen_range(1..=max_entries);
    let mut parts: Vec<Partition> = Vec::new();
    for _ in 0..target * 4 {
        if parts.len() == target {
            break;
        }
        let blocks = rng.gen_range(1..=n);
        let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
        let p = from_labels(&members, &labels);
        if !parts.contains(&p) {
            parts.push(p);
        }
    }
    let entries = parts
        .into_iter()
        .map(|p| (p, rng.gen_range(0.01..1.0f64).powi(2)))
        .collect();
    PartitionDistribution::from_weights(entries).unwrap()
}

pub fn random_questions(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_candidates: usize,
    costs: std::ops::RangeInclusive<u64>,
) -> Vec<MatchQuestion> {
    let mut pairs = all_pairs(&ids(n));
    pairs.shuffle(rng);
    let k = rng.gen_range(1..=max_candidates.min(pairs.len()));
    pairs
        .into_iter()
        .take(k)
        .map(|pair| MatchQuestion {
            prompt: pair.to_string(),
            cost: rng.gen_range(costs.clone()),
            pair,
        })
        .collect()
}

use std::collections::BTreeMap;

use er_refine::model::FactoredDistribution;
use er_refine::oracle::Verdict;

/// Every global partition with its probability, by explicit product.
pub fn global_entries(dist: &FactoredDistribution) -> Vec<(Partition, f64)> {
    let mut out: Vec<(Vec<Vec<RecordId>>, f64)> = vec![(Vec::new(), 1.0)];
    for comp in dist.components() {
        let mut next = Vec::new();
        for (clusters, p) in &out {
            for (q, w) in comp.entries() {
                let mut c = clusters.clone();
                c.extend(q.clusters().iter().cloned());
                next.push((c, p * w));
            }
        }
        out = next;
    }
    out.into_iter().map(|(c, p)| (Partition::new(c).unwrap(), p)).collect()
}

fn co_clustered(p: &Partition, pair: &RecordPair) -> bool {
    p.clusters().iter().any(|c| c.contains(pair.a()) && c.contains(pair.b()))
}

/// Entropy of the answer vector, by grouping global partitions.
pub fn brute_joint_entropy(dist: &FactoredDistribution, pairs: &[RecordPair], base: f64) -> f64 {
    let mut groups: BTreeMap<Vec<bool>, f64> = BTreeMap::new();
    for (p, w) in global_entries(dist) {
        let key: Vec<bool> = pairs.iter().map(|pair| co_clustered(&p, pair)).collect();
        *groups.entry(key).or_default() += w;
    }
    -groups.values().filter(|q| **q > 0.0).map(|q| q * q.ln()).sum::<f64>() / base.ln()
}

/// Best feasible subset value by trying all subsets.
pub fn brute_exact_value(dist: &FactoredDistribution, questions: &[MatchQuestion], budget: u64, base: f64) -> f64 {
    let mut best = 0.0f64;
    for mask in 0u32..(1 << questions.len()) {
        let chosen: Vec<&MatchQuestion> = (0..questions.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &questions[i])
            .collect();
        if chosen.iter().map(|q| q.cost).sum::<u64>() > budget {
            continue;
        }
        let pairs: Vec<RecordPair> = chosen.iter().map(|q| q.pair.clone()).collect();
        best = best.max(brute_joint_entropy(dist, &pairs, base));
    }
    best
}

/// Product-weight distribution over all partitions of `members`, found by
/// trying every labelling in `0..n` per member.
pub fn brute_partitions(
    members: &[RecordId],
    scores: &BTreeMap<RecordPair, f64>,
    default_prob: f64,
) -> BTreeMap<Partition, f64> {
    let n = members.len();
    let mut weights: BTreeMap<Partition, f64> = BTreeMap::new();
    let mut labels = vec![0usize; n];
    loop {
        let p = from_labels(members, &labels);
        if !weights.contains_key(&p) {
            let mut w = 1.0;
            for pair in all_pairs(members) {
                let s = scores.get(&pair).copied().unwrap_or(default_prob);
                w *= if co_clustered(&p, &pair) { s } else { 1.0 - s };
            }
            weights.insert(p, w);
        }
        let mut i = 0;
        while i < n && labels[i] == n - 1 {
            labels[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        labels[i] += 1;
    }
    let total: f64 = weights.values().sum();
    weights.into_iter().filter(|(_, w)| *w > 0.0).map(|(p, w)| (p, w / total)).collect()
}

/// Bayes update written out directly.
pub fn brute_posterior(entries: &[(Partition, f64)], pair: &RecordPair, verdict: Verdict, theta: f64) -> Vec<f64> {
    let joint: Vec<f64> = entries
        .iter()
        .map(|(p, w)| {
            let said_match = verdict == Verdict::Match;
            w * if co_clustered(p, pair) == said_match { theta } else { 1.0 - theta }
        })
        .collect();
    let z: f64 = joint.iter().sum();
    joint.iter().map(|j| j / z).collect()
}

pub fn question(a: &str, b: &str, cost: u64) -> MatchQuestion {
    let pair = RecordPair::of(a, b).unwrap();
    MatchQuestion {
        prompt: pair.to_string(),
        cost,
        pair,
    }
}
