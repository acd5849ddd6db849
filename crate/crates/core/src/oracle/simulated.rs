use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use super::{Exchange, Oracle, OracleAnswer, OracleError, Theta, Verdict};
use crate::model::{Partition, RecordPair};
use crate::select::MatchQuestion;

/// Planted true partition of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub partition: Partition,
}

impl GroundTruth {
    pub fn new(partition: Partition) -> Self {
        Self { partition }
    }

    pub fn verdict(&self, pair: &RecordPair) -> Result<Verdict, OracleError> {
        self.partition
            .same_cluster(pair)
            .map(Verdict::from_bool)
            .map_err(|e| OracleError::Rejected(e.to_string()))
    }
}

/// Seed for one question, derived from the master seed and the canonical
/// pair so that answers do not depend on call order or threading.
pub fn question_seed(master: u64, pair: &RecordPair) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(pair.a().as_str().as_bytes());
    h.update([0u8]);
    h.update(pair.b().as_str().as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

/// Truthful verdict with probability `theta`, flipped otherwise.
pub fn simulated_ask(
    question: &MatchQuestion,
    truth: &GroundTruth,
    theta: Theta,
    seed: u64,
) -> Result<OracleAnswer, OracleError> {
    let truthful = truth.verdict(&question.pair)?;
    let mut rng = ChaCha8Rng::seed_from_u64(question_seed(seed, &question.pair));
    let verdict = if rng.gen::<f64>() < theta.value() {
        truthful
    } else {
        truthful.flipped()
    };
    let raw = verdict.as_str().to_string();
    Ok(OracleAnswer {
        pair: question.pair.clone(),
        verdict,
        transcript: vec![Exchange {
            request: question.prompt.clone(),
            response: raw.clone(),
        }],
        raw,
        tokens_billed: question.cost,
    })
}

/// Noisy oracle answering from a planted ground truth.
#[derive(Debug, Clone)]
pub struct SimulatedOracle {
    truth: GroundTruth,
    theta: Theta,
    seed: u64,
}

impl SimulatedOracle {
    pub fn new(truth: GroundTruth, theta: Theta, seed: u64) -> Self {
        Self { truth, theta, seed }
    }
}

impl Oracle for SimulatedOracle {
    fn ask(&self, question: &MatchQuestion) -> Result<OracleAnswer, OracleError> {
        simulated_ask(question, &self.truth, self.theta, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::ids;

    fn truth() -> GroundTruth {
        GroundTruth::new(Partition::new(vec![ids(&["a", "b"]), ids(&["c"])]).unwrap())
    }

    fn question(a: &str, b: &str) -> MatchQuestion {
        MatchQuestion {
            pair: RecordPair::of(a, b).unwrap(),
            prompt: String::new(),
            cost: 5,
        }
    }

    #[test]
    fn perfect_oracle_is_truthful() {
        let theta = Theta::with_override(1.0).unwrap();
        for seed in 0..200 {
            let ans = simulated_ask(&question("a", "b"), &truth(), theta, seed).unwrap();
            assert_eq!(ans.verdict, Verdict::Match);
            let ans = simulated_ask(&question("a", "c"), &truth(), theta, seed).unwrap();
            assert_eq!(ans.verdict, Verdict::NoMatch);
        }
    }

    #[test]
    fn empirical_accuracy_near_theta() {
        let theta = Theta::new(0.9).unwrap();
        let q = question("a", "b");
        let n = 10_000;
        let truthful = (0..n)
            .filter(|&s| simulated_ask(&q, &truth(), theta, s).unwrap().verdict == Verdict::Match)
            .count();
        let frac = truthful as f64 / n as f64;
        assert!((frac - 0.9).abs() <= 0.01, "{frac}");
    }

    #[test]
    fn flipping_truth_flips_truthful_verdicts() {
        let theta = Theta::new(0.7).unwrap();
        let flipped = GroundTruth::new(Partition::new(vec![ids(&["a"]), ids(&["b", "c"])]).unwrap());
        for seed in 0..100 {
            for (x, y) in [("a", "b"), ("b", "c")] {
                let q = question(x, y);
                let v1 = simulated_ask(&q, &truth(), theta, seed).unwrap().verdict;
                let v2 = simulated_ask(&q, &flipped, theta, seed).unwrap().verdict;
                assert_eq!(v1, v2.flipped());
            }
        }
    }

    #[test]
    fn deterministic_per_seed_and_pair() {
        let o = SimulatedOracle::new(truth(), Theta::new(0.6).unwrap(), 42);
        let q = question("a", "c");
        assert_eq!(o.ask(&q).unwrap(), o.ask(&q).unwrap());
        assert_eq!(o.ask(&q).unwrap().tokens_billed, 5);
    }
}
