use std::collections::HashSet;
use std::io::Write;

use serde::Serialize;

use super::config::RunConfig;
use super::synth::{generate_corpus, SyntheticSpec};
use crate::error::{Error, Result};
use crate::init::{initialize, score_pairs, InitConfig, PairScore};
use crate::model::{FactoredDistribution, Partition, Record, BITS};
use crate::oracle::{GroundTruth, SimulatedOracle, Theta};
use crate::refine::{run_loop, LoopConfig, StopPolicy};
use crate::select::{
    build_questions, candidate_pairs, Budget, MatchQuestion, Selector, StrategyKind,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairwiseScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 over co-clustered pairs. No predicted positives
/// gives precision 1; no true positives gives recall 1.
pub fn pairwise_f1(predicted: &Partition, truth: &Partition) -> Result<PairwiseScores> {
    if predicted.universe() != truth.universe() {
        return Err(Error::UniverseMismatch);
    }
    let pred: HashSet<_> = predicted.matched_pairs().into_iter().collect();
    let gold: HashSet<_> = truth.matched_pairs().into_iter().collect();
    let tp = pred.intersection(&gold).count() as f64;
    let precision = if pred.is_empty() { 1.0 } else { tp / pred.len() as f64 };
    let recall = if gold.is_empty() { 1.0 } else { tp / gold.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(PairwiseScores { precision, recall, f1 })
}

/// Initializes, raising tau in steps of 0.05 while a blocking component is
/// too large to enumerate. Returns the distribution and the tau used.
pub fn initialize_escalating(
    records: &[Record],
    sources: &[Vec<PairScore>],
    config: &InitConfig,
) -> Result<(FactoredDistribution, f64)> {
    let mut cfg = config.clone();
    loop {
        match initialize(records, sources, &cfg) {
            Err(Error::ComponentTooLarge { .. }) if cfg.tau < 1.0 => {
                cfg.tau = (cfg.tau + 0.05).min(1.0);
            }
            other => return other.map(|d| (d, cfg.tau)),
        }
    }
}

/// Outcome of one refinement run in a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOutcome {
    pub scores: PairwiseScores,
    pub final_entropy: f64,
    pub tokens: u64,
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let std = if xs.len() < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub budget: u64,
    pub strategy: StrategyKind,
    pub seeds: usize,
    pub precision: Stat,
    pub recall: Stat,
    pub f1: Stat,
    pub final_entropy: Stat,
    pub tokens: Stat,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
}

impl EvalReport {
    pub fn row(&self, strategy: StrategyKind, budget: u64) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.strategy == strategy && r.budget == budget)
    }

    pub fn write_csv(&self, out: impl Write) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "budget",
            "strategy",
            "seeds",
            "precision_mean",
            "precision_std",
            "recall_mean",
            "recall_std",
            "f1_mean",
            "f1_std",
            "final_entropy_mean",
            "final_entropy_std",
            "tokens_mean",
            "tokens_std",
        ])?;
        for r in &self.rows {
            let mut row = vec![r.budget.to_string(), r.strategy.name().to_string(), r.seeds.to_string()];
            for s in [r.precision, r.recall, r.f1, r.final_entropy, r.tokens] {
                row.push(format!("{:.6}", s.mean));
                row.push(format!("{:.6}", s.std));
            }
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// One planted-truth corpus, initialized and ready for refinement runs.
pub struct Scenario {
    pub records: Vec<Record>,
    pub truth: Partition,
    pub initial: FactoredDistribution,
    pub questions: Vec<MatchQuestion>,
    pub tau: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn synthetic(config: &RunConfig, seed: u64) -> Result<Self> {
        let spec = SyntheticSpec {
            entities: config.eval_entities,
            min_duplicates: config.eval_min_duplicates,
            max_duplicates: config.eval_max_duplicates,
            noise: config.eval_noise,
        };
        let (records, truth) = generate_corpus(&spec, seed)?;
        let scores = score_pairs(&records, &config.matcher(&records))?;
        let (initial, tau) = initialize_escalating(&records, &[scores], &config.init_config())?;
        let template = super::load_template(config)?;
        let questions = build_questions(&candidate_pairs(&initial), &records, &template, &config.cost_model()?)?;
        Ok(Self {
            records,
            truth,
            initial,
            questions,
            tau,
            seed,
        })
    }

    /// Refines under `budget` with a simulated oracle answering from the
    /// planted truth. Convergence stopping is off so that only the budget
    /// and the candidate pool end a run.
    pub fn run(&self, strategy: StrategyKind, budget: u64, theta: Theta, questions_per_iteration: usize) -> Result<RunOutcome> {
        let oracle = SimulatedOracle::new(GroundTruth::new(self.truth.clone()), theta, self.seed);
        let config = LoopConfig {
            theta,
            stop: StopPolicy {
                min_entropy_drop: 0.0,
                max_iterations: self.questions.len() + 1,
            },
            questions_per_iteration,
            parallelism: 1,
            top_k: 1,
        };
        let (dist, trace) = run_loop(
            self.initial.clone(),
            &self.questions,
            &oracle,
            &mut Selector::new(strategy, self.seed),
            Budget::new(budget),
            &config,
        )?;
        Ok(RunOutcome {
            scores: pairwise_f1(&dist.map_partition(), &self.truth)?,
            final_entropy: dist.entropy(BITS)?,
            tokens: trace.summary.tokens_billed,
        })
    }
}

/// Sweeps budgets × strategies over `eval_seeds` synthetic corpora.
pub fn run_eval(config: &RunConfig) -> Result<EvalReport> {
    config.validate()?;
    let theta = config.fixed_theta()?;
    let scenarios = (0..config.eval_seeds)
        .map(|s| Scenario::synthetic(config, config.seed.wrapping_add(s)))
        .collect::<Result<Vec<_>>>()?;
    let mut report = EvalReport::default();
    for &strategy in &config.eval_strategies {
        for &budget in &config.eval_budgets {
            let outcomes = scenarios
                .iter()
                .map(|s| s.run(strategy, budget, theta, config.questions_per_iteration))
                .collect::<Result<Vec<_>>>()?;
            let col = |f: &dyn Fn(&RunOutcome) -> f64| Stat::of(&outcomes.iter().map(f).collect::<Vec<_>>());
            report.rows.push(EvalRow {
                budget,
                strategy,
                seeds: outcomes.len(),
                precision: col(&|o| o.scores.precision),
                recall: col(&|o| o.scores.recall),
                f1: col(&|o| o.scores.f1),
                final_entropy: col(&|o| o.final_entropy),
                tokens: col(&|o| o.tokens as f64),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::ids;

    fn part(clusters: &[&[&str]]) -> Partition {
        Partition::new(clusters.iter().map(|c| ids(c)).collect()).unwrap()
    }

    #[test]
    fn f1_examples() {
        let p = part(&[&["a", "b"], &["c"]]);
        let s = pairwise_f1(&p, &p).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        let singles = part(&[&["a"], &["b"], &["c"]]);
        let s = pairwise_f1(&singles, &singles).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        let s = pairwise_f1(&p, &part(&[&["a"], &["b", "c"]])).unwrap();
        assert_eq!((s.precision, s.recall, s.f1), (0.0, 0.0, 0.0));
        assert_eq!(pairwise_f1(&p, &part(&[&["a", "b"]])), Err(Error::UniverseMismatch));
    }

    #[test]
    fn stat_uses_sample_deviation() {
        let s = Stat::of(&[1.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.std - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(Stat::of(&[5.0]).std, 0.0);
    }
}
