use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Match,
    NoMatch,
}

impl Verdict {
    pub fn from_bool(same: bool) -> Self {
        if same {
            Verdict::Match
        } else {
            Verdict::NoMatch
        }
    }

    pub fn is_match(self) -> bool {
        self == Verdict::Match
    }

    pub fn flipped(self) -> Self {
        Self::from_bool(!self.is_match())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Match => "MATCH",
            Verdict::NoMatch => "NO_MATCH",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Strict parse of a one-word verdict.
///
/// Case is folded, surrounding punctuation and whitespace are dropped, and
/// `-` or inner spaces count as `_`. Anything other than `MATCH` or
/// `NO_MATCH` (or `NOMATCH`) is rejected.
pub fn parse_verdict(response: &str) -> Option<Verdict> {
    let normalized: String = response
        .trim()
        .chars()
        .map(|c| match c {
            '-' | ' ' => '_',
            c => c.to_ascii_uppercase(),
        })
        .filter(|c| c.is_ascii_alphanumeric() || *c == '_')
        .collect();
    match normalized.trim_matches('_') {
        "MATCH" => Some(Verdict::Match),
        "NO_MATCH" | "NOMATCH" => Some(Verdict::NoMatch),
        _ => None,
    }
}
