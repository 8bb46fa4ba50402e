// SPDX-License-Identifier: Apache-2.0

//! Local triple store standing in for a remote knowledge base.

mod interest;
mod ntriples;
pub mod vocab;

pub use interest::{concept_by_label, extract_interest, interest_token, is_category, label_key, most_frequent};
pub use ntriples::{parse_ntriples, serialize_ntriples};

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid IRI {0:?}")]
    InvalidIri(String),
    #[error("unknown concept <{0}>")]
    UnknownConcept(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Iri(String);

impl Iri {
    pub fn new(s: &str) -> Result<Self, StoreError> {
        let bad = s.is_empty()
            || s.chars()
                .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'));
        if bad {
            return Err(StoreError::InvalidIri(s.to_string()));
        }
        Ok(Iri(s.to_string()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Trailing segment after the last `/`, `#` or `:`.
    pub fn local_name(&self) -> &str {
        self.0.rsplit(['/', '#', ':']).next().unwrap_or(&self.0)
    }
}

impl std::borrow::Borrow<str> for Iri {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Iri(Iri),
    Literal { value: String, lang: Option<String> },
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            Term::Literal { .. } => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(iri) => write!(f, "<{iri}>"),
            Term::Literal { value, lang: None } => write!(f, "\"{}\"", ntriples::escape_literal(value)),
            Term::Literal { value, lang: Some(lang) } => write!(f, "\"{}\"@{lang}", ntriples::escape_literal(value)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Iri,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: &str, predicate: &str, object: Term) -> Result<Self, StoreError> {
        Ok(Triple { subject: Iri::new(subject)?, predicate: Iri::new(predicate)?, object })
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}> <{}> {} .", self.subject, self.predicate, self.object)
    }
}

/// Triple-pattern with optional positions; `None` is a wildcard.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pattern {
    pub subject: Option<Iri>,
    pub predicate: Option<Iri>,
    pub object: Option<Term>,
}

impl Pattern {
    pub fn matches(&self, t: &Triple) -> bool {
        self.subject.as_ref().is_none_or(|s| *s == t.subject)
            && self.predicate.as_ref().is_none_or(|p| *p == t.predicate)
            && self.object.as_ref().is_none_or(|o| *o == t.object)
    }

    pub fn is_unbound(&self) -> bool {
        self.subject.is_none() && self.predicate.is_none() && self.object.is_none()
    }
}

/// Immutable set of triples, sorted, with per-position indexes.
#[derive(Clone, Debug)]
pub struct TripleStore {
    triples: Vec<Triple>,
    by_subject: BTreeMap<Iri, Vec<usize>>,
    by_predicate: BTreeMap<Iri, Vec<usize>>,
    by_object: BTreeMap<Term, Vec<usize>>,
    category_prefix: String,
}

impl Default for TripleStore {
    fn default() -> Self {
        TripleStore::new(Vec::new())
    }
}

impl TripleStore {
    pub fn new(triples: impl IntoIterator<Item = Triple>) -> Self {
        let mut triples: Vec<Triple> = triples.into_iter().collect();
        triples.sort();
        triples.dedup();
        let mut by_subject: BTreeMap<Iri, Vec<usize>> = BTreeMap::new();
        let mut by_predicate: BTreeMap<Iri, Vec<usize>> = BTreeMap::new();
        let mut by_object: BTreeMap<Term, Vec<usize>> = BTreeMap::new();
        for (i, t) in triples.iter().enumerate() {
            by_subject.entry(t.subject.clone()).or_default().push(i);
            by_predicate.entry(t.predicate.clone()).or_default().push(i);
            by_object.entry(t.object.clone()).or_default().push(i);
        }
        TripleStore {
            triples,
            by_subject,
            by_predicate,
            by_object,
            category_prefix: vocab::DEFAULT_CATEGORY_PREFIX.to_string(),
        }
    }

    pub fn with_category_prefix(mut self, prefix: &str) -> Self {
        self.category_prefix = prefix.to_string();
        self
    }

    pub fn category_prefix(&self) -> &str {
        &self.category_prefix
    }

    pub fn parse(text: &str) -> Result<Self, StoreError> {
        Ok(TripleStore::new(parse_ntriples(text)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| StoreError::Io { path: path.display().to_string(), source })?;
        TripleStore::parse(&text)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.triples.binary_search(t).is_ok()
    }

    /// Whether the IRI occurs in any position.
    pub fn mentions(&self, iri: &Iri) -> bool {
        self.by_subject.contains_key(iri)
            || self.by_predicate.contains_key(iri)
            || self.by_object.contains_key(&Term::Iri(iri.clone()))
    }

    /// All triples matching the pattern, in (subject, predicate, object) order.
    pub fn query(&self, pattern: &Pattern) -> Vec<&Triple> {
        let lists = [
            pattern.subject.as_ref().map(|s| self.by_subject.get(s)),
            pattern.predicate.as_ref().map(|p| self.by_predicate.get(p)),
            pattern.object.as_ref().map(|o| self.by_object.get(o)),
        ];
        let candidates =
            lists.into_iter().flatten().map(|list| list.map_or(&[][..], Vec::as_slice)).min_by_key(|list| list.len());
        match candidates {
            Some(indices) => indices.iter().map(|&i| &self.triples[i]).filter(|t| pattern.matches(t)).collect(),
            None => {
                log::warn!("unbound triple pattern: scanning all {} triples", self.triples.len());
                self.triples.iter().collect()
            }
        }
    }

    pub(crate) fn objects<'a>(&'a self, subject: &Iri, predicate: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        self.by_subject
            .get(subject)
            .into_iter()
            .flatten()
            .map(|&i| &self.triples[i])
            .filter(move |t| t.predicate.as_str() == predicate)
            .map(|t| &t.object)
    }

    pub(crate) fn with_predicate<'a>(&'a self, predicate: &str) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_predicate.get(predicate).into_iter().flatten().map(|&i| &self.triples[i])
    }
}
