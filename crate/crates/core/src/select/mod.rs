//! Question rendering, pricing and budgeted selection.

mod answers;
mod cost;
mod exact;
mod greedy;
mod prompt;
mod question;
mod strategy;

pub use answers::{candidate_pairs, joint_answer_entropy, marginal_gain};
pub use cost::CostModel;
pub use exact::{exact_select, EXACT_SELECT_MAX_CANDIDATES};
pub use greedy::{default_seed_size, greedy_select, greedy_select_limited, greedy_select_seeded, MAX_SEED_SIZE};
pub use prompt::{render_prompt, PromptTemplate, RecordIndex, DEFAULT_TEMPLATE};
pub use question::{build_questions, Budget, MatchQuestion, QuestionSet};
pub use strategy::{Selector, StrategyKind};
