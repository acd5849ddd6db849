use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::model::{FactoredDistribution, Partition, PartitionDistribution, RecordPair};
use crate::oracle::{OracleAnswer, Theta, Verdict};

/// Bayes update of one component on a noisy verdict about `pair`.
///
/// Each partition's likelihood is `theta` when it agrees with the verdict
/// and `1 - theta` otherwise; the normalizer is the sum of
/// prior × likelihood over all entries.
pub fn posterior_update(
    dist: &PartitionDistribution,
    pair: &RecordPair,
    verdict: Verdict,
    theta: Theta,
) -> Result<PartitionDistribution> {
    dist.check_pair(pair)
        .map_err(|_| Error::PairOutsideUniverse(pair.clone()))?;
    let t = theta.value();
    let weights = dist
        .entries()
        .iter()
        .map(|(partition, prior)| {
            let agrees = partition.same_cluster(pair)? == verdict.is_match();
            Ok(prior * if agrees { t } else { 1.0 - t })
        })
        .collect::<Result<Vec<f64>>>()?;
    if weights.iter().sum::<f64>() <= 0.0 {
        return Err(Error::ZeroNormalizer);
    }
    dist.reweighted(weights)
}

/// Applies one answer to the component holding its pair. Pairs that span
/// two components are "no match" on every partition, so the likelihood is
/// constant and the distribution is unchanged (unless `theta` is 1 and the
/// verdict is a match, which no partition supports).
pub fn apply_answer(
    dist: &FactoredDistribution,
    pair: &RecordPair,
    verdict: Verdict,
    theta: Theta,
) -> Result<FactoredDistribution> {
    let located = dist
        .locate(pair)
        .map_err(|_| Error::PairOutsideUniverse(pair.clone()))?;
    match located {
        Some(c) => {
            let mut out = dist.clone();
            out.replace_component(c, posterior_update(&dist.components()[c], pair, verdict, theta)?);
            Ok(out)
        }
        None if verdict.is_match() && theta.value() >= 1.0 => Err(Error::ZeroNormalizer),
        None => Ok(dist.clone()),
    }
}

/// Sequential [`apply_answer`] over answers on distinct pairs.
pub fn batch_update(
    dist: &FactoredDistribution,
    answers: &[OracleAnswer],
    theta: Theta,
) -> Result<FactoredDistribution> {
    let mut seen = HashSet::with_capacity(answers.len());
    for a in answers {
        if !seen.insert(&a.pair) {
            return Err(Error::DuplicatePairInBatch(a.pair.clone()));
        }
    }
    let mut out = dist.clone();
    for a in answers {
        out = apply_answer(&out, &a.pair, a.verdict, theta)?;
    }
    Ok(out)
}

/// Most probable partition (canonical tie-breaking within each component).
pub fn map_partition(dist: &FactoredDistribution) -> Partition {
    dist.map_partition()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{ids, table2};
    use crate::model::BITS;

    fn r34() -> RecordPair {
        RecordPair::of("r3", "r4").unwrap()
    }

    fn probs(d: &PartitionDistribution) -> Vec<f64> {
        d.probabilities().collect()
    }

    #[test]
    fn running_example_match() {
        let post = posterior_update(&table2(), &r34(), Verdict::Match, Theta::new(0.9).unwrap()).unwrap();
        for (got, want) in probs(&post).iter().zip([0.9, 0.06, 0.04]) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
        assert!(post.entropy(BITS).unwrap() < table2().entropy(BITS).unwrap());
    }

    #[test]
    fn running_example_no_match() {
        // numerators 0.5*0.1, 0.3*0.9, 0.2*0.9 over 0.5
        let post = posterior_update(&table2(), &r34(), Verdict::NoMatch, Theta::new(0.9).unwrap()).unwrap();
        for (got, want) in probs(&post).iter().zip([0.1, 0.54, 0.36]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn uninformative_theta() {
        let half = Theta::new(0.5).unwrap();
        for v in [Verdict::Match, Verdict::NoMatch] {
            let post = posterior_update(&table2(), &r34(), v, half).unwrap();
            for (got, want) in probs(&post).iter().zip(probs(&table2())) {
                assert!((got - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pair_outside_universe() {
        let err = posterior_update(&table2(), &RecordPair::of("r1", "zz").unwrap(), Verdict::Match, Theta::new(0.9).unwrap());
        assert!(matches!(err, Err(Error::PairOutsideUniverse(_))));
    }

    #[test]
    fn perfect_oracle_contradiction_is_zero_normalizer() {
        let d = PartitionDistribution::certain(Partition::singletons(&ids(&["a", "b"])).unwrap());
        let err = posterior_update(&d, &RecordPair::of("a", "b").unwrap(), Verdict::Match, Theta::with_override(1.0).unwrap());
        assert_eq!(err, Err(Error::ZeroNormalizer));
    }

    #[test]
    fn batch_examples() {
        let d: FactoredDistribution = table2().into();
        let theta = Theta::new(0.8).unwrap();
        assert_eq!(batch_update(&d, &[], theta).unwrap(), d);

        // (r1,r5) is never co-clustered: a NoMatch answer changes nothing
        let settled = OracleAnswer::bare(RecordPair::of("r1", "r5").unwrap(), Verdict::NoMatch);
        let after = batch_update(&d, &[settled], theta).unwrap();
        for (x, y) in probs(&after.components()[0]).iter().zip(probs(&table2())) {
            assert!((x - y).abs() < 1e-12);
        }

        let dup = vec![
            OracleAnswer::bare(r34(), Verdict::Match),
            OracleAnswer::bare(r34(), Verdict::NoMatch),
        ];
        assert!(matches!(batch_update(&d, &dup, theta), Err(Error::DuplicatePairInBatch(_))));
    }

    #[test]
    fn map_of_running_example() {
        let d: FactoredDistribution = table2().into();
        let p1 = table2().entries()[0].0.clone();
        assert_eq!(map_partition(&d), p1);
        let post = apply_answer(&d, &r34(), Verdict::Match, Theta::new(0.9).unwrap()).unwrap();
        assert_eq!(map_partition(&post), p1);
    }
}
