use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque record identifier. Ordering is plain string ordering and is what
/// every canonical form in the crate is built on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RecordId(String);

impl RecordId {
    pub fn new(value: impl Into<String>) -> Result<Self> {
        let value = value.into();
        if value.is_empty() {
            return Err(Error::EmptyRecordId);
        }
        Ok(Self(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for RecordId {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl From<RecordId> for String {
    fn from(id: RecordId) -> Self {
        id.0
    }
}

impl fmt::Display for RecordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A row of the input dataset: an id plus named string attributes in
/// column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    id: RecordId,
    attributes: Vec<(String, String)>,
}

impl Record {
    pub fn new(id: RecordId, attributes: Vec<(String, String)>) -> Result<Self> {
        for (i, (name, _)) in attributes.iter().enumerate() {
            if attributes[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::DuplicateAttribute {
                    id,
                    name: name.clone(),
                });
            }
        }
        Ok(Self { id, attributes })
    }

    pub fn id(&self) -> &RecordId {
        &self.id
    }

    pub fn attributes(&self) -> &[(String, String)] {
        &self.attributes
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_str())
    }
}

/// Unordered pair of distinct records, stored with `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RecordPair {
    a: RecordId,
    b: RecordId,
}

impl RecordPair {
    pub fn new(x: RecordId, y: RecordId) -> Result<Self> {
        match x.cmp(&y) {
            std::cmp::Ordering::Less => Ok(Self { a: x, b: y }),
            std::cmp::Ordering::Greater => Ok(Self { a: y, b: x }),
            std::cmp::Ordering::Equal => Err(Error::SelfPair(x)),
        }
    }

    /// Convenience constructor from string ids.
    pub fn of(x: &str, y: &str) -> Result<Self> {
        Self::new(RecordId::new(x)?, RecordId::new(y)?)
    }

    pub fn a(&self) -> &RecordId {
        &self.a
    }

    pub fn b(&self) -> &RecordId {
        &self.b
    }
}

impl fmt::Display for RecordPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Checks that ids are unique across a dataset.
pub fn ensure_unique_ids(records: &[Record]) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(records.len());
    for r in records {
        if !seen.insert(r.id()) {
            return Err(Error::DuplicateRecordId(r.id().clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_is_canonical() {
        let p = RecordPair::of("r2", "r1").unwrap();
        assert_eq!(p.a().as_str(), "r1");
        assert_eq!(p, RecordPair::of("r1", "r2").unwrap());
    }

    #[test]
    fn rejects_degenerate_ids_and_pairs() {
        assert_eq!(RecordId::new(""), Err(Error::EmptyRecordId));
        assert!(matches!(RecordPair::of("x", "x"), Err(Error::SelfPair(_))));
    }

    #[test]
    fn duplicate_attribute_rejected() {
        let id = RecordId::new("r1").unwrap();
        let attrs = vec![("Name".into(), "a".into()), ("Name".into(), "b".into())];
        assert!(matches!(
            Record::new(id, attrs),
            Err(Error::DuplicateAttribute { .. })
        ));
    }
}
