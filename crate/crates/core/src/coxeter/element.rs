use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use super::backend::State;
use super::CoxeterError;

/// Identifies the Coxeter matrix a system was built from. Elements of two
/// systems with the same matrix are interchangeable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SystemId(pub(crate) u64);

/// A finite sequence of generators, stored 0-based and written 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// 0-based generator indices.
    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Parses whitespace-separated 1-based generator indices.
    pub fn parse(text: &str) -> Result<Self, CoxeterError> {
        text.parse()
    }
}

impl FromStr for Word {
    type Err = CoxeterError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        text.split_whitespace()
            .map(|tok| match tok.parse::<u16>() {
                Ok(k) if (1..=256).contains(&k) => Ok((k - 1) as u8),
                _ => Err(CoxeterError::Parse(format!("invalid generator {tok:?}"))),
            })
            .collect::<Result<_, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &l in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", l as usize + 1)?;
        }
        Ok(())
    }
}

impl FromIterator<u8> for Word {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

/// A group element in canonical form: its ShortLex-least reduced word.
///
/// Equality, hashing and ordering only look at the system and the normal
/// form. Elements are ordered by length first, then lexicographically.
#[derive(Clone, Debug)]
pub struct Element {
    pub(crate) system: SystemId,
    pub(crate) word: Word,
    pub(crate) state: State,
}

impl Element {
    pub fn normal_form(&self) -> &Word {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn system_id(&self) -> SystemId {
        self.system
    }
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.system == other.system && self.word == other.word
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.system.hash(state);
        self.word.hash(state);
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.system.cmp(&other.system))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// Deduplicated set of elements in (length, ShortLex) order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ElementSet(BTreeSet<Element>);

impl ElementSet {
    pub fn new() -> Self {
        ElementSet(BTreeSet::new())
    }

    pub fn insert(&mut self, e: Element) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: &Element) -> bool {
        self.0.remove(e)
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.0.contains(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Element> + ExactSizeIterator {
        self.0.iter()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        self.0.difference(&other.0).cloned().collect()
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        self.0.union(&other.0).cloned().collect()
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// Normal forms as 1-based strings, identity as `""`.
    pub fn words(&self) -> Vec<String> {
        self.0.iter().map(|e| e.to_string()).collect()
    }
}

impl FromIterator<Element> for ElementSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        ElementSet(iter.into_iter().collect())
    }
}

impl IntoIterator for ElementSet {
    type Item = Element;
    type IntoIter = std::collections::btree_set::IntoIter<Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

impl<'a> IntoIterator for &'a ElementSet {
    type Item = &'a Element;
    type IntoIter = std::collections::btree_set::Iter<'a, Element>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if e.is_identity() {
                f.write_str("e")?;
            } else {
                write!(f, "{e}")?;
            }
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn word_parsing() {
        let w = Word::parse(" 1 2\t1 ").unwrap();
        assert_eq!(w.letters(), &[0, 1, 0]);
        assert_eq!(w.to_string(), "1 2 1");
        assert!(Word::parse("").unwrap().is_empty());
        assert!(Word::parse("0").is_err());
        assert!(Word::parse("1 x").is_err());
        assert_eq!(w.reversed().to_string(), "1 2 1");
        assert_eq!(Word::parse("1 2").unwrap().reversed().to_string(), "2 1");
    }
}
