use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

/// Opaque label of an edge, vertex or color. Ordered by its string form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(String);

impl ElementId {
    pub fn new(s: impl Into<String>) -> Self {
        ElementId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ElementId {
    fn from(s: &str) -> Self {
        ElementId(s.to_owned())
    }
}

impl From<String> for ElementId {
    fn from(s: String) -> Self {
        ElementId(s)
    }
}

impl From<&ElementId> for ElementId {
    fn from(s: &ElementId) -> Self {
        s.clone()
    }
}

impl Borrow<str> for ElementId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

/// Sorted, duplicate-free list of ids. Position in the list is the index
/// used throughout the crate.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct FiniteSet(Vec<ElementId>);

impl FiniteSet {
    pub fn new<I, T>(items: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<ElementId>,
    {
        let mut v: Vec<ElementId> = items.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        FiniteSet(v)
    }

    /// Like `new` but reports the first duplicate instead of merging it.
    pub fn distinct<I, T>(items: I) -> Result<Self, ElementId>
    where
        I: IntoIterator<Item = T>,
        T: Into<ElementId>,
    {
        let mut v: Vec<ElementId> = items.into_iter().map(Into::into).collect();
        v.sort();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(w[0].clone());
            }
        }
        Ok(FiniteSet(v))
    }

    pub fn singleton(x: impl Into<ElementId>) -> Self {
        FiniteSet(vec![x.into()])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ElementId> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[ElementId] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &ElementId {
        &self.0[i]
    }

    pub fn index_of(&self, x: &str) -> Option<usize> {
        self.0.binary_search_by(|p| p.as_str().cmp(x)).ok()
    }

    pub fn contains(&self, x: &str) -> bool {
        self.index_of(x).is_some()
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.0.iter().all(|x| other.contains(x.as_str()))
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a ElementId;
    type IntoIter = std::slice::Iter<'a, ElementId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl<'de> Deserialize<'de> for FiniteSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<ElementId>::deserialize(d)?;
        FiniteSet::distinct(v).map_err(|dup| serde::de::Error::custom(format!("duplicate element {dup}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_indexed() {
        let s = FiniteSet::new(["b", "a", "c", "a"]);
        assert_eq!(s.len(), 3);
        assert_eq!(s.index_of("c"), Some(2));
        assert_eq!(s.index_of("z"), None);
        assert!(FiniteSet::distinct(["x", "x"]).is_err());
    }
}
