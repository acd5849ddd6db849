use std::collections::HashMap;
use std::io::{BufRead, Read};

use serde::Deserialize;

use super::{parse_verdict, Exchange, Oracle, OracleAnswer, OracleError, Verdict};
use crate::model::{RecordId, RecordPair};
use crate::select::MatchQuestion;

#[derive(Debug, Clone, PartialEq)]
struct ScriptedAnswer {
    verdict: Verdict,
    raw: String,
    tokens: Option<u64>,
}

/// Replays predetermined answers keyed by pair.
#[derive(Debug, Clone, Default)]
pub struct ScriptedOracle {
    answers: HashMap<RecordPair, ScriptedAnswer>,
}

#[derive(Deserialize)]
struct ScriptRow {
    id_a: String,
    id_b: String,
    verdict: String,
    #[serde(default)]
    tokens_billed: Option<u64>,
}

impl ScriptedOracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_answer(mut self, pair: RecordPair, verdict: Verdict) -> Self {
        self.insert(pair, verdict, verdict.as_str().to_string(), None);
        self
    }

    fn insert(&mut self, pair: RecordPair, verdict: Verdict, raw: String, tokens: Option<u64>) {
        self.answers.insert(pair, ScriptedAnswer { verdict, raw, tokens });
    }

    /// Reads `id_a,id_b,verdict[,tokens_billed]` CSV with a header row.
    pub fn from_csv(reader: impl Read) -> Result<Self, OracleError> {
        let mut out = Self::new();
        let mut rdr = csv::Reader::from_reader(reader);
        for (i, row) in rdr.deserialize::<ScriptRow>().enumerate() {
            let row = row.map_err(|e| OracleError::Rejected(format!("script row {}: {e}", i + 2)))?;
            let pair = pair_of(&row.id_a, &row.id_b)?;
            let verdict = parse_verdict(&row.verdict).ok_or_else(|| {
                OracleError::Rejected(format!("script row {}: bad verdict {:?}", i + 2, row.verdict))
            })?;
            out.insert(pair, verdict, row.verdict, row.tokens_billed);
        }
        Ok(out)
    }

    /// Rebuilds the answers recorded in a refinement trace (line-delimited
    /// JSON). Lines without answers are skipped.
    pub fn from_trace(reader: impl BufRead) -> Result<Self, OracleError> {
        #[derive(Deserialize)]
        struct Line {
            #[serde(default)]
            answers: Vec<OracleAnswer>,
        }
        let mut out = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| OracleError::Rejected(e.to_string()))?;
            if line.trim().is_empty() {
                continue;
            }
            let parsed: Line = serde_json::from_str(&line)
                .map_err(|e| OracleError::Rejected(format!("trace line {}: {e}", i + 1)))?;
            for a in parsed.answers {
                out.insert(a.pair, a.verdict, a.raw, Some(a.tokens_billed));
            }
        }
        Ok(out)
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }
}

fn pair_of(a: &str, b: &str) -> Result<RecordPair, OracleError> {
    let conv = |s: &str| RecordId::new(s.trim()).map_err(|e| OracleError::Rejected(e.to_string()));
    RecordPair::new(conv(a)?, conv(b)?).map_err(|e| OracleError::Rejected(e.to_string()))
}

impl Oracle for ScriptedOracle {
    fn ask(&self, question: &MatchQuestion) -> Result<OracleAnswer, OracleError> {
        let a = self
            .answers
            .get(&question.pair)
            .ok_or_else(|| OracleError::Unscripted(question.pair.clone()))?;
        Ok(OracleAnswer {
            pair: question.pair.clone(),
            verdict: a.verdict,
            raw: a.raw.clone(),
            tokens_billed: a.tokens.unwrap_or(question.cost),
            transcript: vec![Exchange {
                request: question.prompt.clone(),
                response: a.raw.clone(),
            }],
        })
    }
}
