use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{parse_verdict, Exchange, Oracle, OracleAnswer, OracleError};
use crate::select::{CostModel, MatchQuestion};

/// Appended to the prompt when a reply could not be parsed.
pub const CLARIFYING_SUFFIX: &str =
    "\n\nYour previous reply could not be understood. Reply with exactly one word: MATCH or NO_MATCH.";

/// First pause after a transient failure; doubles per attempt.
const RETRY_BACKOFF: Duration = Duration::from_millis(200);

/// Chat-completion endpoint settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemoteConfig {
    /// Base address, e.g. `https://api.example.com/v1`; requests go to
    /// `{base_url}/chat/completions`.
    pub base_url: String,
    pub model: String,
    /// Environment variable holding the API key.
    pub api_key_env: String,
    /// Extra attempts after a parse or transient transport failure.
    pub retries: u32,
    pub timeout_secs: u64,
}

impl Default for RemoteConfig {
    fn default() -> Self {
        Self {
            base_url: "https://api.openai.com/v1".into(),
            model: "gpt-4o-mini".into(),
            api_key_env: "ER_REFINE_API_KEY".into(),
            retries: 2,
            timeout_secs: 60,
        }
    }
}

pub struct RemoteOracle {
    config: RemoteConfig,
    api_key: String,
    cost_model: CostModel,
    client: reqwest::blocking::Client,
}

impl RemoteOracle {
    /// Reads the API key from the configured environment variable.
    pub fn from_env(config: RemoteConfig, cost_model: CostModel) -> Result<Self, OracleError> {
        let key = std::env::var(&config.api_key_env).map_err(|_| {
            OracleError::Authentication(format!("environment variable {} is not set", config.api_key_env))
        })?;
        Self::new(config, key, cost_model)
    }

    pub fn new(config: RemoteConfig, api_key: String, cost_model: CostModel) -> Result<Self, OracleError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| OracleError::Transport(e.to_string()))?;
        Ok(Self {
            config,
            api_key,
            cost_model,
            client,
        })
    }

    fn endpoint(&self) -> String {
        format!("{}/chat/completions", self.config.base_url.trim_end_matches('/'))
    }

    /// One request; returns the reply text and the billed tokens if reported.
    fn call(&self, prompt: &str) -> Result<(String, Option<u64>), AttemptError> {
        let body = json!({
            "model": self.config.model,
            "temperature": 0,
            "messages": [{ "role": "user", "content": prompt }],
        });
        let resp = self
            .client
            .post(self.endpoint())
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| AttemptError::Retryable(e.to_string()))?;
        let status = resp.status();
        if status == reqwest::StatusCode::UNAUTHORIZED || status == reqwest::StatusCode::FORBIDDEN {
            return Err(AttemptError::Auth(format!("endpoint returned {status}")));
        }
        if status.is_server_error() || status == reqwest::StatusCode::TOO_MANY_REQUESTS {
            return Err(AttemptError::Retryable(format!("endpoint returned {status}")));
        }
        if !status.is_success() {
            return Err(AttemptError::Fatal(format!("endpoint returned {status}")));
        }
        let parsed: ChatResponse = resp
            .json()
            .map_err(|e| AttemptError::Fatal(format!("unreadable response body: {e}")))?;
        let content = parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| AttemptError::Fatal("response has no choices".into()))?;
        Ok((content, parsed.usage.and_then(|u| u.total_tokens)))
    }
}

enum AttemptError {
    Retryable(String),
    Fatal(String),
    Auth(String),
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: Message,
}

#[derive(Deserialize)]
struct Message {
    content: String,
}

#[derive(Deserialize)]
struct Usage {
    total_tokens: Option<u64>,
}

impl Oracle for RemoteOracle {
    fn ask(&self, question: &MatchQuestion) -> Result<OracleAnswer, OracleError> {
        let mut prompt = question.prompt.clone();
        let mut transcript = Vec::new();
        let mut billed = 0u64;
        let mut last_transport = None;
        for attempt in 0..=self.config.retries {
            match self.call(&prompt) {
                Ok((reply, usage)) => {
                    billed += usage.unwrap_or_else(|| self.cost_model.question_cost(&prompt));
                    transcript.push(Exchange {
                        request: prompt.clone(),
                        response: reply.clone(),
                    });
                    if let Some(verdict) = parse_verdict(&reply) {
                        return Ok(OracleAnswer {
                            pair: question.pair.clone(),
                            verdict,
                            raw: reply,
                            tokens_billed: billed,
                            transcript,
                        });
                    }
                    if attempt == 0 {
                        prompt.push_str(CLARIFYING_SUFFIX);
                    }
                    last_transport = None;
                }
                Err(AttemptError::Auth(msg)) => return Err(OracleError::Authentication(msg)),
                Err(AttemptError::Fatal(msg)) => return Err(OracleError::Transport(msg)),
                Err(AttemptError::Retryable(msg)) => {
                    last_transport = Some(msg);
                    if attempt < self.config.retries {
                        std::thread::sleep(RETRY_BACKOFF * 2u32.pow(attempt));
                    }
                }
            }
        }
        match last_transport {
            Some(msg) if transcript.is_empty() => Err(OracleError::Transport(msg)),
            _ => Err(OracleError::Parse {
                transcript,
                tokens_billed: billed,
            }),
        }
    }
}
