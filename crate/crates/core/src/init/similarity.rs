use serde::{Deserialize, Serialize};

use super::scores::PairScore;
use crate::error::{Error, Result};
use crate::model::{ensure_unique_ids, Record, RecordPair};

/// Source label attached to scores from the built-in matcher.
pub const BASELINE_SOURCE: &str = "baseline";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityKind {
    /// `1 - levenshtein / max_len` on case-folded values.
    #[default]
    EditDistance,
    /// Jaccard overlap of alphanumeric tokens.
    TokenOverlap,
}

impl SimilarityKind {
    pub fn similarity(self, x: &str, y: &str) -> f64 {
        let x = fold(x);
        let y = fold(y);
        match self {
            SimilarityKind::EditDistance => strsim::normalized_levenshtein(&x, &y),
            SimilarityKind::TokenOverlap => {
                let tx = tokens(&x);
                let ty = tokens(&y);
                if tx.is_empty() && ty.is_empty() {
                    return 1.0;
                }
                let inter = tx.iter().filter(|t| ty.contains(t)).count();
                let union = tx.len() + ty.len() - inter;
                inter as f64 / union as f64
            }
        }
    }
}

fn fold(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

fn tokens(s: &str) -> Vec<&str> {
    let mut t: Vec<&str> = s
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .collect();
    t.sort_unstable();
    t.dedup();
    t
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AttributeRule {
    pub name: String,
    pub weight: f64,
    #[serde(default)]
    pub kind: SimilarityKind,
}

/// Monotone map from aggregate similarity to match probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Calibration {
    #[default]
    Identity,
    /// Linear interpolation between `(similarity, probability)` knots. The
    /// first knot must be `(0, 0)`; similarities past the last knot map to
    /// its probability.
    PiecewiseLinear(Vec<(f64, f64)>),
}

impl Calibration {
    pub fn validate(&self) -> Result<()> {
        let Calibration::PiecewiseLinear(knots) = self else {
            return Ok(());
        };
        if knots.first() != Some(&(0.0, 0.0)) {
            return Err(Error::InvalidCalibration("first knot must be (0, 0)".into()));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0 && w[1].1 >= w[0].1) {
                return Err(Error::InvalidCalibration(
                    "knots must increase in similarity and not decrease in probability".into(),
                ));
            }
        }
        if knots
            .iter()
            .any(|&(x, y)| !(0.0..=1.0).contains(&x) || !(0.0..=1.0).contains(&y))
        {
            return Err(Error::InvalidCalibration("knots must lie in [0,1]^2".into()));
        }
        Ok(())
    }

    pub fn apply(&self, similarity: f64) -> f64 {
        match self {
            Calibration::Identity => similarity,
            Calibration::PiecewiseLinear(knots) => {
                for w in knots.windows(2) {
                    let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                    if similarity <= x1 {
                        return y0 + (y1 - y0) * (similarity - x0) / (x1 - x0);
                    }
                }
                knots.last().map_or(0.0, |k| k.1)
            }
        }
    }
}

/// Configuration of the built-in pairwise matcher.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatcherConfig {
    pub attributes: Vec<AttributeRule>,
    #[serde(default)]
    pub calibration: Calibration,
}

impl MatcherConfig {
    /// Uniform weights over every attribute name that occurs in `records`,
    /// in first-seen order.
    pub fn for_records(records: &[Record], kind: SimilarityKind) -> Self {
        let mut names: Vec<&str> = Vec::new();
        for r in records {
            for (name, _) in r.attributes() {
                if !names.contains(&name.as_str()) {
                    names.push(name);
                }
            }
        }
        Self {
            attributes: names
                .into_iter()
                .map(|name| AttributeRule {
                    name: name.to_string(),
                    weight: 1.0,
                    kind,
                })
                .collect(),
            calibration: Calibration::Identity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.attributes.iter().any(|a| !(a.weight >= 0.0) || !a.weight.is_finite()) {
            return Err(Error::Config("attribute weights must be finite and >= 0".into()));
        }
        if !self.attributes.iter().any(|a| a.weight > 0.0) {
            return Err(Error::EmptyAttributeWeights);
        }
        self.calibration.validate()
    }

    /// Weighted mean of per-attribute similarities. Attributes empty on both
    /// sides carry no evidence and are left out of the mean.
    pub fn similarity(&self, x: &Record, y: &Record) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for rule in self.attributes.iter().filter(|r| r.weight > 0.0) {
            let vx = x.get(&rule.name).unwrap_or("").trim();
            let vy = y.get(&rule.name).unwrap_or("").trim();
            if vx.is_empty() && vy.is_empty() {
                continue;
            }
            let s = if vx.is_empty() || vy.is_empty() {
                0.0
            } else {
                rule.kind.similarity(vx, vy)
            };
            num += rule.weight * s;
            den += rule.weight;
        }
        if den > 0.0 {
            (num / den).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Scores every unordered record pair and keeps those with a positive
/// calibrated probability. Output is in canonical pair order.
pub fn score_pairs(records: &[Record], config: &MatcherConfig) -> Result<Vec<PairScore>> {
    ensure_unique_ids(records)?;
    config.validate()?;
    let mut out = Vec::new();
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let p = config
                .calibration
                .apply(config.similarity(&records[i], &records[j]))
                .clamp(0.0, 1.0);
            if p > 0.0 {
                let pair = RecordPair::new(records[i].id().clone(), records[j].id().clone())?;
                out.push(PairScore::new(pair, p, BASELINE_SOURCE)?);
            }
        }
    }
    out.sort_by(|x, y| x.pair.cmp(&y.pair));
    Ok(out)
}
