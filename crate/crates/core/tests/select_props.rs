mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_pairs, brute_exact_value, brute_joint_entropy, from_labels, ids, random_distribution, random_questions};
use er_refine::model::{FactoredDistribution, PartitionDistribution, RecordPair, BITS};
use er_refine::select::{
    exact_select, greedy_select, greedy_select_limited, joint_answer_entropy, marginal_gain, Budget,
};

fn single(d: PartitionDistribution) -> FactoredDistribution {
    FactoredDistribution::from(d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn joint_entropy_matches_grouping(seed in any::<u64>(), n in 2usize..7, k in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = single(random_distribution(&mut rng, n, 40));
        let mut pairs = all_pairs(&ids(n));
        pairs.shuffle(&mut rng);
        pairs.truncate(k);
        for base in [BITS, std::f64::consts::E, 10.0] {
            let got = joint_answer_entropy(&d, &pairs, base).unwrap();
            prop_assert!((got - brute_joint_entropy(&d, &pairs, base)).abs() < 1e-10);
        }
    }

    #[test]
    fn joint_entropy_bounded(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = single(random_distribution(&mut rng, n, 40));
        let pairs = all_pairs(&ids(n));
        let joint = joint_answer_entropy(&d, &pairs, BITS).unwrap();
        prop_assert!(joint <= d.entropy(BITS).unwrap() + 1e-12);
        let singles: f64 = pairs.iter().map(|p| joint_answer_entropy(&d, std::slice::from_ref(p), BITS).unwrap()).sum();
        prop_assert!(joint <= singles + 1e-12);
        // All pairs identify the partition exactly.
        prop_assert!((joint - d.entropy(BITS).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn gains_non_negative_and_diminishing(seed in any::<u64>(), n in 3usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = single(random_distribution(&mut rng, n, 30));
        let mut pairs = all_pairs(&ids(n));
        pairs.shuffle(&mut rng);
        pairs.truncate(5);
        let m = pairs.len();
        for a in 0u32..(1 << m) {
            for b in 0u32..(1 << m) {
                if a & b != a {
                    continue;
                }
                let sub: Vec<RecordPair> = (0..m).filter(|i| a & (1 << i) != 0).map(|i| pairs[i].clone()).collect();
                let sup: Vec<RecordPair> = (0..m).filter(|i| b & (1 << i) != 0).map(|i| pairs[i].clone()).collect();
                for x in (0..m).filter(|i| b & (1 << i) == 0) {
                    let gs = marginal_gain(&d, &sub, &pairs[x], BITS).unwrap();
                    let gb = marginal_gain(&d, &sup, &pairs[x], BITS).unwrap();
                    prop_assert!(gb >= -1e-12);
                    prop_assert!(gs >= gb - 1e-12);
                }
            }
        }
    }

    #[test]
    fn exact_select_is_optimal(seed in any::<u64>(), n in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = single(random_distribution(&mut rng, n, 30));
        let qs = random_questions(&mut rng, n, 8, 1..=50);
        let budget = rng.gen_range(0..=qs.iter().map(|q| q.cost).sum::<u64>());
        let chosen = exact_select(&d, &qs, &Budget::new(budget), BITS).unwrap();
        prop_assert!(chosen.total_cost() <= budget);
        let value = joint_answer_entropy(&d, &chosen.pairs(), BITS).unwrap();
        prop_assert!((value - brute_exact_value(&d, &qs, budget, BITS)).abs() < 1e-10);
    }

    #[test]
    fn greedy_is_feasible_and_near_optimal(seed in any::<u64>(), n in 2usize..7, limit in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = single(random_distribution(&mut rng, n, 40));
        let qs = random_questions(&mut rng, n, 8, 1..=50);
        let budget = Budget::new(rng.gen_range(0..=qs.iter().map(|q| q.cost).sum::<u64>()));
        let g = greedy_select(&d, &qs, &budget, BITS).unwrap();
        prop_assert!(g.total_cost() <= budget.remaining());
        let exact = joint_answer_entropy(&d, &exact_select(&d, &qs, &budget, BITS).unwrap().pairs(), BITS).unwrap();
        let got = joint_answer_entropy(&d, &g.pairs(), BITS).unwrap();
        prop_assert!(got >= (1.0 - (-1f64).exp()) * exact - 1e-12);
        let limited = greedy_select_limited(&d, &qs, &budget, Some(limit), BITS).unwrap();
        prop_assert!(limited.len() <= limit);
        prop_assert!(limited.total_cost() <= budget.remaining());
    }

    #[test]
    fn implied_answers_have_no_gain(seed in any::<u64>(), n in 3usize..7) {
        // r0 and r1 share a cluster everywhere, so (r0, r2) answers exactly
        // as (r1, r2) does.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let members = ids(n);
        let mut parts = Vec::new();
        for _ in 0..20 {
            let mut labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
            labels[1] = labels[0];
            let p = from_labels(&members, &labels);
            if !parts.contains(&p) {
                parts.push(p);
            }
        }
        let d = single(PartitionDistribution::from_weights(parts.into_iter().map(|p| (p, rng.gen_range(0.1..1.0))).collect()).unwrap());
        let gain = marginal_gain(&d, &[RecordPair::of("r1", "r2").unwrap()], &RecordPair::of("r0", "r2").unwrap(), BITS).unwrap();
        prop_assert!(gain.abs() <= 1e-12);
    }
}

#[test]
fn cross_component_pairs_carry_no_information() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = random_distribution(&mut rng, 3, 5);
    let json = serde_json::to_string(&random_distribution(&mut rng, 3, 5)).unwrap();
    let b: PartitionDistribution = serde_json::from_str(&json.replace("\"r", "\"s")).unwrap();
    let d = FactoredDistribution::new(vec![a, b]).unwrap();
    let cross = RecordPair::of("r0", "s0").unwrap();
    assert_eq!(joint_answer_entropy(&d, &[cross], BITS).unwrap(), 0.0);
}
