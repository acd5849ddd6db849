mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_pairs, brute_posterior, ids, random_distribution};
use er_refine::app::{RunConfig, Scenario};
use er_refine::model::{FactoredDistribution, PartitionDistribution, RecordPair, BITS};
use er_refine::oracle::{OracleAnswer, Theta, Verdict};
use er_refine::refine::{batch_update, posterior_update};
use er_refine::select::StrategyKind;

fn probs(d: &PartitionDistribution) -> Vec<f64> {
    d.probabilities().collect()
}

fn pick_pair(rng: &mut ChaCha8Rng, n: usize) -> RecordPair {
    all_pairs(&ids(n)).choose(rng).unwrap().clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn update_matches_direct_bayes(seed in any::<u64>(), n in 2usize..7, theta in 0.01f64..0.99, m in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_distribution(&mut rng, n, 40);
        let pair = pick_pair(&mut rng, n);
        let verdict = Verdict::from_bool(m);
        let post = posterior_update(&d, &pair, verdict, Theta::new(theta).unwrap()).unwrap();
        let want = brute_posterior(d.entries(), &pair, verdict, theta);
        for (g, w) in probs(&post).iter().zip(want) {
            prop_assert!((g - w).abs() < 1e-12);
        }
        let total: f64 = post.probabilities().sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        for ((_, before), (_, after)) in d.entries().iter().zip(post.entries()) {
            prop_assert_eq!(*before > 0.0, *after > 0.0);
        }
    }

    #[test]
    fn theta_symmetry(seed in any::<u64>(), n in 2usize..7, theta in 0.01f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_distribution(&mut rng, n, 40);
        let pair = pick_pair(&mut rng, n);
        let a = posterior_update(&d, &pair, Verdict::Match, Theta::new(theta).unwrap()).unwrap();
        let b = posterior_update(&d, &pair, Verdict::NoMatch, Theta::new(1.0 - theta).unwrap()).unwrap();
        for (x, y) in probs(&a).iter().zip(probs(&b)) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn batch_order_invariant(seed in any::<u64>(), n in 2usize..7, theta in 0.05f64..0.95) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = FactoredDistribution::from(random_distribution(&mut rng, n, 40));
        let mut pairs = all_pairs(&ids(n));
        pairs.shuffle(&mut rng);
        let k = rng.gen_range(1..=pairs.len().min(5));
        let mut answers: Vec<OracleAnswer> = pairs[..k]
            .iter()
            .map(|p| OracleAnswer::bare(p.clone(), Verdict::from_bool(rng.gen_bool(0.5))))
            .collect();
        let theta = Theta::new(theta).unwrap();
        let first = batch_update(&d, &answers, theta).unwrap();
        answers.shuffle(&mut rng);
        let second = batch_update(&d, &answers, theta).unwrap();
        for (x, y) in probs(&first.components()[0]).iter().zip(probs(&second.components()[0])) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn expected_posterior_entropy_never_exceeds_prior(seed in any::<u64>(), n in 2usize..7, theta in 0.01f64..0.99) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_distribution(&mut rng, n, 40);
        let pair = pick_pair(&mut rng, n);
        let t = Theta::new(theta).unwrap();
        let m = d.pair_probability(&pair).unwrap();
        let p_match = m * theta + (1.0 - m) * (1.0 - theta);
        let expected = p_match * posterior_update(&d, &pair, Verdict::Match, t).unwrap().entropy(BITS).unwrap()
            + (1.0 - p_match) * posterior_update(&d, &pair, Verdict::NoMatch, t).unwrap().entropy(BITS).unwrap();
        prop_assert!(expected <= d.entropy(BITS).unwrap() + 1e-12);
    }
}

#[test]
fn synthetic_runs_end_below_their_start() {
    let mut config = RunConfig::default();
    config.eval_entities = 10;
    config.eval_min_duplicates = 2;
    config.eval_max_duplicates = 2;
    let theta = Theta::new(0.9).unwrap();
    let mut violations = 0;
    for seed in 0..20 {
        let s = Scenario::synthetic(&config, seed).unwrap();
        assert_eq!(s.records.len(), 20);
        let start = s.initial.entropy(BITS).unwrap();
        let out = s.run(StrategyKind::Greedy, 1000, theta, 1).unwrap();
        if out.final_entropy > start {
            violations += 1;
        }
    }
    assert!(violations <= 2, "{violations} runs ended above their initial entropy");
}
