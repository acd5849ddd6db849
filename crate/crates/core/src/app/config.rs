use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::init::{EnumerationLimits, InitConfig, MatcherConfig, SimilarityKind};
use crate::model::Record;
use crate::oracle::{RemoteConfig, Theta};
use crate::refine::{LoopConfig, StopPolicy};
use crate::select::{CostModel, StrategyKind};

/// Which oracle answers questions during `resolve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OracleChoice {
    Remote,
    Simulated,
    Scripted,
}

/// Every setting of a run. Loaded from a flat TOML file; each key has a
/// command-line flag of the same name (underscores become dashes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Records CSV with an `id` column.
    pub records: Option<PathBuf>,
    /// External pair-score CSVs (`id_a,id_b,probability`), one per tool.
    pub pair_scores: Vec<PathBuf>,
    /// Whether the built-in attribute matcher contributes a score source.
    pub baseline_matcher: bool,
    pub similarity: SimilarityKind,
    pub tau: f64,
    pub default_prob: f64,
    pub max_component_size: usize,
    pub max_entries: usize,
    pub chars_per_token: f64,
    pub answer_allowance: u64,
    /// Prompt template file; the built-in template when absent.
    pub template: Option<PathBuf>,
    pub oracle: OracleChoice,
    /// Oracle accuracy. Mutually exclusive with `accuracy_sample`.
    pub theta: Option<f64>,
    /// Labeled `id_a,id_b,verdict` CSV used to estimate theta.
    pub accuracy_sample: Option<PathBuf>,
    /// Allows theta = 1 (a perfect oracle).
    pub theta_override: bool,
    /// Scripted answers: `id_a,id_b,verdict[,tokens_billed]` CSV or a trace.
    pub script: Option<PathBuf>,
    /// Ground truth `id,entity` CSV for the simulated oracle.
    pub truth: Option<PathBuf>,
    pub budget: u64,
    pub strategy: StrategyKind,
    pub questions_per_iteration: usize,
    pub parallelism: usize,
    pub min_entropy_drop: f64,
    pub max_iterations: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub top_k: usize,
    /// Start `resolve` from a saved distribution instead of initializing.
    pub distribution: Option<PathBuf>,
    pub api_base_url: String,
    pub api_model: String,
    pub api_key_env: String,
    pub api_retries: u32,
    pub api_timeout_secs: u64,
    pub eval_entities: usize,
    pub eval_min_duplicates: usize,
    pub eval_max_duplicates: usize,
    pub eval_noise: f64,
    pub eval_budgets: Vec<u64>,
    pub eval_strategies: Vec<StrategyKind>,
    pub eval_seeds: u64,
}

pub const DEFAULT_THETA: f64 = 0.9;

impl Default for RunConfig {
    fn default() -> Self {
        let init = InitConfig::default();
        let cost = CostModel::default();
        let stop = StopPolicy::default();
        let remote = RemoteConfig::default();
        Self {
            records: None,
            pair_scores: Vec::new(),
            baseline_matcher: true,
            similarity: SimilarityKind::default(),
            tau: init.tau,
            default_prob: init.default_prob,
            max_component_size: init.limits.max_component_size,
            max_entries: init.limits.max_entries,
            chars_per_token: cost.chars_per_token,
            answer_allowance: cost.answer_allowance,
            template: None,
            oracle: OracleChoice::Simulated,
            theta: None,
            accuracy_sample: None,
            theta_override: false,
            script: None,
            truth: None,
            budget: 1000,
            strategy: StrategyKind::Greedy,
            questions_per_iteration: 1,
            parallelism: 1,
            min_entropy_drop: stop.min_entropy_drop,
            max_iterations: stop.max_iterations,
            seed: 0,
            out_dir: PathBuf::from("er-refine-out"),
            top_k: 10,
            distribution: None,
            api_base_url: remote.base_url,
            api_model: remote.model,
            api_key_env: remote.api_key_env,
            api_retries: remote.retries,
            api_timeout_secs: remote.timeout_secs,
            eval_entities: 15,
            eval_min_duplicates: 2,
            eval_max_duplicates: 3,
            eval_noise: 0.2,
            eval_budgets: vec![0, 500, 1000, 2000],
            eval_strategies: StrategyKind::ALL.to_vec(),
            eval_seeds: 20,
        }
    }
}

fn parse_similarity(s: &str) -> std::result::Result<SimilarityKind, String> {
    match s.replace('-', "_").as_str() {
        "edit_distance" => Ok(SimilarityKind::EditDistance),
        "token_overlap" => Ok(SimilarityKind::TokenOverlap),
        _ => Err(format!("unknown similarity {s:?} (edit_distance | token_overlap)")),
    }
}

/// Command-line overrides, one per configuration key.
#[derive(Debug, Clone, Default, Args)]
pub struct ConfigOverrides {
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Repeat to supply several tools.
    #[arg(long = "pair-scores")]
    pub pair_scores: Option<Vec<PathBuf>>,
    #[arg(long)]
    pub baseline_matcher: Option<bool>,
    #[arg(long, value_parser = parse_similarity)]
    pub similarity: Option<SimilarityKind>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub default_prob: Option<f64>,
    #[arg(long)]
    pub max_component_size: Option<usize>,
    #[arg(long)]
    pub max_entries: Option<usize>,
    #[arg(long)]
    pub chars_per_token: Option<f64>,
    #[arg(long)]
    pub answer_allowance: Option<u64>,
    #[arg(long)]
    pub template: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub oracle: Option<OracleChoice>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub accuracy_sample: Option<PathBuf>,
    #[arg(long)]
    pub theta_override: Option<bool>,
    #[arg(long)]
    pub script: Option<PathBuf>,
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub strategy: Option<StrategyKind>,
    #[arg(long)]
    pub questions_per_iteration: Option<usize>,
    #[arg(long)]
    pub parallelism: Option<usize>,
    #[arg(long)]
    pub min_entropy_drop: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub top_k: Option<usize>,
    #[arg(long)]
    pub distribution: Option<PathBuf>,
    #[arg(long)]
    pub api_base_url: Option<String>,
    #[arg(long)]
    pub api_model: Option<String>,
    #[arg(long)]
    pub api_key_env: Option<String>,
    #[arg(long)]
    pub api_retries: Option<u32>,
    #[arg(long)]
    pub api_timeout_secs: Option<u64>,
    #[arg(long)]
    pub eval_entities: Option<usize>,
    #[arg(long)]
    pub eval_min_duplicates: Option<usize>,
    #[arg(long)]
    pub eval_max_duplicates: Option<usize>,
    #[arg(long)]
    pub eval_noise: Option<f64>,
    /// Comma-separated token budgets.
    #[arg(long, value_delimiter = ',')]
    pub eval_budgets: Option<Vec<u64>>,
    /// Comma-separated strategy names.
    #[arg(long, value_delimiter = ',')]
    pub eval_strategies: Option<Vec<StrategyKind>>,
    #[arg(long)]
    pub eval_seeds: Option<u64>,
}

macro_rules! override_fields {
    ($cfg:ident, $o:ident; set: $($f:ident),*; wrap: $($g:ident),*) => {
        $( if let Some(v) = $o.$f.clone() { $cfg.$f = v; } )*
        $( if let Some(v) = $o.$g.clone() { $cfg.$g = Some(v); } )*
    };
}

impl RunConfig {
    /// Defaults, then the file (if any), then the overrides.
    pub fn load(file: Option<&Path>, overrides: &ConfigOverrides) -> Result<Self> {
        let mut cfg = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
                Self::from_toml(&text)?
            }
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &ConfigOverrides) {
        override_fields!(self, o;
            set: pair_scores, baseline_matcher, similarity, tau, default_prob, max_component_size,
                max_entries, chars_per_token, answer_allowance, oracle, theta_override, budget,
                strategy, questions_per_iteration, parallelism, min_entropy_drop, max_iterations,
                seed, out_dir, top_k, api_base_url, api_model, api_key_env, api_retries,
                api_timeout_secs, eval_entities, eval_min_duplicates, eval_max_duplicates,
                eval_noise, eval_budgets, eval_strategies, eval_seeds;
            wrap: records, template, theta, accuracy_sample, script, truth, distribution);
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(0.0..=1.0).contains(&self.tau) {
            return bad(format!("tau must lie in [0,1] (got {})", self.tau));
        }
        if !(self.default_prob > 0.0 && self.default_prob < 1.0) {
            return bad(format!("default_prob must lie in (0,1) (got {})", self.default_prob));
        }
        if !(1..=10).contains(&self.max_component_size) {
            return bad(format!(
                "max_component_size must lie in 1..=10 (got {})",
                self.max_component_size
            ));
        }
        if self.max_entries == 0 {
            return bad("max_entries must be positive".into());
        }
        self.cost_model()?;
        if self.theta.is_some() && self.accuracy_sample.is_some() {
            return bad("set either theta or accuracy_sample, not both".into());
        }
        if let Some(t) = self.theta {
            self.make_theta(t)?;
        }
        self.loop_config(Theta::new(0.5)?).validate()?;
        if self.api_timeout_secs == 0 {
            return bad("api_timeout_secs must be positive".into());
        }
        if self.eval_entities == 0 {
            return bad("eval_entities must be positive".into());
        }
        if self.eval_min_duplicates == 0 || self.eval_min_duplicates > self.eval_max_duplicates {
            return bad("need 1 <= eval_min_duplicates <= eval_max_duplicates".into());
        }
        if !(0.0..=1.0).contains(&self.eval_noise) {
            return bad(format!("eval_noise must lie in [0,1] (got {})", self.eval_noise));
        }
        if self.eval_budgets.is_empty() || self.eval_strategies.is_empty() || self.eval_seeds == 0 {
            return bad("eval sweep needs at least one budget, strategy and seed".into());
        }
        Ok(())
    }

    pub fn make_theta(&self, value: f64) -> Result<Theta> {
        if self.theta_override {
            Theta::with_override(value)
        } else {
            Theta::new(value)
        }
    }

    /// Configured theta, or the default when neither theta nor a sample is set.
    pub fn fixed_theta(&self) -> Result<Theta> {
        self.make_theta(self.theta.unwrap_or(DEFAULT_THETA))
    }

    pub fn init_config(&self) -> InitConfig {
        InitConfig {
            tau: self.tau,
            default_prob: self.default_prob,
            limits: EnumerationLimits {
                max_component_size: self.max_component_size,
                max_entries: self.max_entries,
            },
        }
    }

    pub fn matcher(&self, records: &[Record]) -> MatcherConfig {
        MatcherConfig::for_records(records, self.similarity)
    }

    pub fn cost_model(&self) -> Result<CostModel> {
        CostModel::new(self.chars_per_token, self.answer_allowance)
    }

    pub fn stop_policy(&self) -> StopPolicy {
        StopPolicy {
            min_entropy_drop: self.min_entropy_drop,
            max_iterations: self.max_iterations,
        }
    }

    pub fn loop_config(&self, theta: Theta) -> LoopConfig {
        LoopConfig {
            theta,
            stop: self.stop_policy(),
            questions_per_iteration: self.questions_per_iteration,
            parallelism: self.parallelism,
            top_k: self.top_k,
        }
    }

    pub fn remote_config(&self) -> RemoteConfig {
        RemoteConfig {
            base_url: self.api_base_url.clone(),
            model: self.api_model.clone(),
            api_key_env: self.api_key_env.clone(),
            retries: self.api_retries,
            timeout_secs: self.api_timeout_secs,
        }
    }
}
