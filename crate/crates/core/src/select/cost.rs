use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Character-count price function: `ceil(chars / chars_per_token)` for the
/// prompt plus a fixed allowance for the answer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    pub chars_per_token: f64,
    pub answer_allowance: u64,
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            chars_per_token: 4.0,
            answer_allowance: 5,
        }
    }
}

impl CostModel {
    pub fn new(chars_per_token: f64, answer_allowance: u64) -> Result<Self> {
        let m = Self {
            chars_per_token,
            answer_allowance,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chars_per_token.is_finite() && self.chars_per_token > 0.0 {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "chars_per_token must be positive (got {})",
                self.chars_per_token
            )))
        }
    }

    pub fn prompt_tokens(&self, prompt: &str) -> u64 {
        let chars = prompt.chars().count() as f64;
        (chars / self.chars_per_token).ceil() as u64
    }

    pub fn question_cost(&self, prompt: &str) -> u64 {
        self.prompt_tokens(prompt) + self.answer_allowance
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn billing_examples() {
        // ten input tokens, twenty output tokens
        let m = CostModel::new(4.0, 20).unwrap();
        assert_eq!(m.question_cost(&"x".repeat(40)), 30);
        assert_eq!(CostModel::default().question_cost(""), 5);
        assert_eq!(CostModel::default().question_cost(&"y".repeat(160)), 45);
        assert_eq!(CostModel::default().question_cost(&"y".repeat(161)), 46);
        assert!(CostModel::new(0.0, 5).is_err());
    }
}
