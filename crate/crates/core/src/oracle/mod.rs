//! Answer sources for matching questions.
//!
//! Every oracle implements [`Oracle::ask`]. Three are provided: a noisy
//! simulator over a planted ground truth, a scripted replay, and a client
//! for chat-completion style HTTP endpoints.

mod remote;
mod scripted;
mod simulated;
mod verdict;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use remote::{RemoteConfig, RemoteOracle, CLARIFYING_SUFFIX};
pub use scripted::ScriptedOracle;
pub use simulated::{question_seed, simulated_ask, GroundTruth, SimulatedOracle};
pub use verdict::{parse_verdict, Verdict};

use crate::error::{Error, Result};
use crate::model::RecordPair;
use crate::select::MatchQuestion;

/// One request/response exchange with the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exchange {
    pub request: String,
    pub response: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub pair: RecordPair,
    pub verdict: Verdict,
    /// Final reply, verbatim.
    pub raw: String,
    pub tokens_billed: u64,
    #[serde(default)]
    pub transcript: Vec<Exchange>,
}

impl OracleAnswer {
    /// An answer with no transcript and no billed tokens.
    pub fn bare(pair: RecordPair, verdict: Verdict) -> Self {
        Self {
            pair,
            verdict,
            raw: verdict.as_str().to_string(),
            tokens_billed: 0,
            transcript: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum OracleError {
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("authentication failure: {0}")]
    Authentication(String),
    #[error("could not parse a verdict after {} attempt(s)", transcript.len())]
    Parse {
        transcript: Vec<Exchange>,
        tokens_billed: u64,
    },
    #[error("no scripted answer for {0}")]
    Unscripted(RecordPair),
    #[error("question rejected: {0}")]
    Rejected(String),
}

impl OracleError {
    /// Tokens consumed before the failure.
    pub fn tokens_billed(&self) -> u64 {
        match self {
            OracleError::Parse { tokens_billed, .. } => *tokens_billed,
            _ => 0,
        }
    }
}

pub trait Oracle: Send + Sync {
    fn ask(&self, question: &MatchQuestion) -> Result<OracleAnswer, OracleError>;
}

impl<T: Oracle + ?Sized> Oracle for Box<T> {
    fn ask(&self, question: &MatchQuestion) -> Result<OracleAnswer, OracleError> {
        (**self).ask(question)
    }
}

/// Expected probability that the oracle answers correctly.
///
/// Must lie in `(0, 1)`; exactly 1 is only accepted through
/// [`Theta::with_override`].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Theta(f64);

impl Theta {
    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 && value < 1.0 {
            Ok(Self(value))
        } else {
            Err(Error::InvalidTheta(value))
        }
    }

    /// Also admits a perfect oracle (`value == 1`).
    pub fn with_override(value: f64) -> Result<Self> {
        if value == 1.0 {
            Ok(Self(value))
        } else {
            Self::new(value)
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn complement(self) -> Result<Self> {
        Self::new(1.0 - self.0)
    }
}

/// Oracle capability plus the settings of the chosen transport.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleProfile {
    pub theta: Theta,
    pub kind: OracleKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleKind {
    Remote(RemoteConfig),
    Simulated { seed: u64 },
    Scripted,
}

/// `(correct + 1) / (n + 2)`.
pub fn laplace_accuracy(correct: usize, total: usize) -> Result<f64> {
    if total == 0 {
        return Err(Error::EmptySample);
    }
    debug_assert!(correct <= total);
    Ok((correct as f64 + 1.0) / (total as f64 + 2.0))
}

/// Outcome of probing an oracle with labeled questions.
#[derive(Debug, Clone, PartialEq)]
pub struct AccuracyEstimate {
    pub theta: Theta,
    pub correct: usize,
    pub asked: usize,
    pub tokens_billed: u64,
}

/// Estimates Θ by asking every labeled question once.
///
/// Questions the oracle fails to answer count as incorrect. Authentication
/// failures abort the estimate.
pub fn estimate_accuracy(
    oracle: &dyn Oracle,
    sample: &[(MatchQuestion, Verdict)],
) -> Result<std::result::Result<AccuracyEstimate, OracleError>> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut correct = 0;
    let mut tokens = 0;
    for (q, truth) in sample {
        match oracle.ask(q) {
            Ok(a) => {
                tokens += a.tokens_billed;
                if a.verdict == *truth {
                    correct += 1;
                }
            }
            Err(e @ OracleError::Authentication(_)) => return Ok(Err(e)),
            Err(e) => tokens += e.tokens_billed(),
        }
    }
    let theta = Theta::new(laplace_accuracy(correct, sample.len())?)?;
    Ok(Ok(AccuracyEstimate {
        theta,
        correct,
        asked: sample.len(),
        tokens_billed: tokens,
    }))
}
