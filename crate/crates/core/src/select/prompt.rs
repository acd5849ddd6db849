use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Record, RecordId, RecordPair};

/// Template shipped with the crate. Embeds both ids, so distinct pairs
/// always render distinct prompts.
pub const DEFAULT_TEMPLATE: &str = include_str!("../../templates/default_prompt.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Segment {
    Text(String),
    Id(Side),
    /// `Name: value; Name: value` over all attributes.
    AllAttributes(Side),
    Attribute(Side, String),
}

/// A prompt template with `{a.<attr>}` / `{b.<attr>}` placeholders.
///
/// `{a.id}` expands to the record id and `{a.*}` to every attribute.
/// `{{` and `}}` produce literal braces. Attributes a record lacks render
/// as the empty string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    segments: Vec<Segment>,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        Self::parse(DEFAULT_TEMPLATE).expect("default template parses")
    }
}

impl PromptTemplate {
    pub fn parse(source: &str) -> Result<Self> {
        let mut segments = Vec::new();
        let mut text = String::new();
        let mut chars = source.chars().peekable();
        while let Some(c) = chars.next() {
            match c {
                '{' if chars.peek() == Some(&'{') => {
                    chars.next();
                    text.push('{');
                }
                '}' if chars.peek() == Some(&'}') => {
                    chars.next();
                    text.push('}');
                }
                '{' => {
                    let mut body = String::new();
                    loop {
                        match chars.next() {
                            Some('}') => break,
                            Some('{') | None => {
                                return Err(Error::MalformedTemplate(format!(
                                    "unclosed placeholder {{{body}"
                                )))
                            }
                            Some(ch) => body.push(ch),
                        }
                    }
                    if !text.is_empty() {
                        segments.push(Segment::Text(std::mem::take(&mut text)));
                    }
                    segments.push(parse_placeholder(&body)?);
                }
                '}' => {
                    return Err(Error::MalformedTemplate(
                        "unmatched '}' (write '}}' for a literal brace)".into(),
                    ))
                }
                _ => text.push(c),
            }
        }
        if !text.is_empty() {
            segments.push(Segment::Text(text));
        }
        Ok(Self { segments })
    }

    /// Substitutes the pair's records into the template.
    pub fn render(&self, pair: &RecordPair, records: &RecordIndex<'_>) -> Result<String> {
        let a = records.get(pair.a())?;
        let b = records.get(pair.b())?;
        let mut out = String::new();
        for seg in &self.segments {
            let side = |s: &Side| if *s == Side::A { a } else { b };
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Id(s) => out.push_str(side(s).id().as_str()),
                Segment::Attribute(s, name) => out.push_str(side(s).get(name).unwrap_or("")),
                Segment::AllAttributes(s) => {
                    let parts: Vec<String> = side(s)
                        .attributes()
                        .iter()
                        .map(|(k, v)| format!("{k}: {v}"))
                        .collect();
                    out.push_str(&parts.join("; "));
                }
            }
        }
        Ok(out)
    }
}

fn parse_placeholder(body: &str) -> Result<Segment> {
    let (side, rest) = match body.split_once('.') {
        Some(("a", rest)) => (Side::A, rest),
        Some(("b", rest)) => (Side::B, rest),
        _ => {
            return Err(Error::MalformedTemplate(format!(
                "placeholder {{{body}}} must start with 'a.' or 'b.'"
            )))
        }
    };
    Ok(match rest {
        "" => {
            return Err(Error::MalformedTemplate(format!(
                "placeholder {{{body}}} names no attribute"
            )))
        }
        "id" => Segment::Id(side),
        "*" => Segment::AllAttributes(side),
        name => Segment::Attribute(side, name.to_string()),
    })
}

/// Id lookup over a record slice.
pub struct RecordIndex<'a> {
    by_id: HashMap<&'a RecordId, &'a Record>,
}

impl<'a> RecordIndex<'a> {
    pub fn new(records: &'a [Record]) -> Self {
        Self {
            by_id: records.iter().map(|r| (r.id(), r)).collect(),
        }
    }

    pub fn get(&self, id: &RecordId) -> Result<&'a Record> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownRecordId(id.clone()))
    }
}

/// Renders a prompt for one pair.
pub fn render_prompt(pair: &RecordPair, records: &[Record], template: &PromptTemplate) -> Result<String> {
    template.render(pair, &RecordIndex::new(records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::profile_records;

    #[test]
    fn name_template() {
        let t = PromptTemplate::parse("A: {a.Name} / B: {b.Name}. Same entity?").unwrap();
        let p = render_prompt(&RecordPair::of("r1", "r2").unwrap(), &profile_records(), &t).unwrap();
        assert_eq!(p, "A: John Doe / B: J. Doe. Same entity?");
    }

    #[test]
    fn empty_template_renders_empty() {
        let t = PromptTemplate::parse("").unwrap();
        let p = render_prompt(&RecordPair::of("r1", "r2").unwrap(), &profile_records(), &t).unwrap();
        assert_eq!(p, "");
    }

    #[test]
    fn default_template_is_injective() {
        let records = profile_records();
        let t = PromptTemplate::default();
        let mut seen = std::collections::HashSet::new();
        for i in 0..records.len() {
            for j in i + 1..records.len() {
                let pair = RecordPair::new(records[i].id().clone(), records[j].id().clone()).unwrap();
                let p = render_prompt(&pair, &records, &t).unwrap();
                assert!(p.contains("MATCH or NO_MATCH"));
                assert!(seen.insert(p));
            }
        }
    }

    #[test]
    fn malformed_templates() {
        for bad in ["{a.Name", "{c.Name}", "{Name}", "{a.}", "stray }"] {
            assert!(
                matches!(PromptTemplate::parse(bad), Err(Error::MalformedTemplate(_))),
                "{bad}"
            );
        }
        let t = PromptTemplate::parse("{{literal}} {a.id}").unwrap();
        let p = render_prompt(&RecordPair::of("r1", "r2").unwrap(), &profile_records(), &t).unwrap();
        assert_eq!(p, "{literal} r1");
    }

    #[test]
    fn unknown_record() {
        let t = PromptTemplate::default();
        let err = render_prompt(&RecordPair::of("r1", "zz").unwrap(), &profile_records(), &t);
        assert!(matches!(err, Err(Error::UnknownRecordId(_))));
    }
}
