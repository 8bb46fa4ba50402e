// SPDX-License-Identifier: Apache-2.0

//! FOAF-shaped social graph: who knows whom, interests, one current location.

use crate::graph::SimpleGraph;
use crate::store::{vocab, Term, Triple};
use crate::text::natural_cmp;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SocialError {
    #[error("persons without a location: {}", join(.0))]
    MissingLocation(Vec<PersonId>),
    #[error("{person} has several locations: {}", .locations.join(", "))]
    MultipleLocations { person: PersonId, locations: Vec<String> },
    #[error("unknown person {0}")]
    UnknownPerson(String),
    #[error("{0} and {1} already know each other")]
    AlreadyFriends(PersonId, PersonId),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Store(#[from] crate::store::StoreError),
}

fn join(ids: &[PersonId]) -> String {
    ids.iter().map(PersonId::as_str).collect::<Vec<_>>().join(", ")
}

/// Person identifier (an IRI or a short fixture id). Digit runs compare
/// numerically, so `U2 < U10`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PersonId(String);

impl PersonId {
    pub fn new(id: &str) -> Self {
        PersonId(id.trim().to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl Ord for PersonId {
    fn cmp(&self, other: &Self) -> Ordering {
        natural_cmp(&self.0, &other.0).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PersonId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PersonId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LocationMode {
    /// More than one location is an error.
    #[default]
    Strict,
    /// More than one location keeps the lexicographically first.
    Lenient,
}

/// Raw FOAF-style statements, before validation.
#[derive(Clone, Debug, Default)]
pub struct Statements {
    pub knows: Vec<(String, String)>,
    pub interests: Vec<(String, String)>,
    pub locations: Vec<(String, String)>,
}

impl Statements {
    pub fn from_triples<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> Self {
        let mut out = Statements::default();
        for t in triples {
            let object = match &t.object {
                Term::Iri(iri) => iri.as_str().to_string(),
                Term::Literal { value, .. } => value.clone(),
            };
            let target = match t.predicate.as_str() {
                vocab::FOAF_KNOWS => &mut out.knows,
                vocab::FOAF_INTEREST => &mut out.interests,
                vocab::FOAF_BASED_NEAR => &mut out.locations,
                _ => continue,
            };
            target.push((t.subject.as_str().to_string(), object));
        }
        out
    }

    /// Compact TSV `person  knows|interest|based_near  target`.
    pub fn parse_tsv(text: &str) -> Result<Self, SocialError> {
        let mut out = Statements::default();
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |reason: String| SocialError::Parse { line: idx + 1, reason };
            let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
            let [person, relation, target] = fields[..] else {
                return Err(err(format!("expected 3 columns, found {}", fields.len())));
            };
            if person.is_empty() || target.is_empty() {
                return Err(err("empty person or target".into()));
            }
            let list = match relation {
                "knows" => &mut out.knows,
                "interest" => &mut out.interests,
                "based_near" => &mut out.locations,
                other => return Err(err(format!("unknown relation {other:?}"))),
            };
            list.push((person.to_string(), target.to_string()));
        }
        Ok(out)
    }

    pub fn into_graph(self, mode: LocationMode) -> Result<SocialGraph, SocialError> {
        let mut g = SocialGraph::default();
        for (a, b) in &self.knows {
            let (a, b) = (PersonId::new(a), PersonId::new(b));
            g.persons.insert(a.clone());
            g.persons.insert(b.clone());
            if a == b {
                log::warn!("ignoring {a} knows itself");
                continue;
            }
            g.statements.insert((a.clone(), b.clone()));
            g.knows.insert(ordered(a, b));
        }
        for (p, interest) in &self.interests {
            let p = PersonId::new(p);
            g.persons.insert(p.clone());
            g.interests.entry(p).or_default().insert(interest.trim().to_string());
        }
        let mut locations: BTreeMap<PersonId, BTreeSet<String>> = BTreeMap::new();
        for (p, loc) in &self.locations {
            let p = PersonId::new(p);
            g.persons.insert(p.clone());
            locations.entry(p).or_default().insert(loc.trim().to_string());
        }
        let missing: Vec<PersonId> = g.persons.iter().filter(|p| !locations.contains_key(*p)).cloned().collect();
        if !missing.is_empty() {
            return Err(SocialError::MissingLocation(missing));
        }
        for (person, locs) in locations {
            if locs.len() > 1 && mode == LocationMode::Strict {
                return Err(SocialError::MultipleLocations { person, locations: locs.into_iter().collect() });
            }
            let first = locs.into_iter().next().expect("location sets are non-empty");
            g.location.insert(person, first);
        }
        Ok(g)
    }
}

fn ordered(a: PersonId, b: PersonId) -> (PersonId, PersonId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Persons, undirected `knows` pairs, interests and one location each.
/// Interest and location values are IRIs or fixture tokens, compared verbatim.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SocialGraph {
    persons: BTreeSet<PersonId>,
    knows: BTreeSet<(PersonId, PersonId)>,
    interests: BTreeMap<PersonId, BTreeSet<String>>,
    location: BTreeMap<PersonId, String>,
    statements: BTreeSet<(PersonId, PersonId)>,
}

pub fn load_foaf(triples: &[Triple], mode: LocationMode) -> Result<SocialGraph, SocialError> {
    Statements::from_triples(triples).into_graph(mode)
}

impl SocialGraph {
    pub fn parse_tsv(text: &str, mode: LocationMode) -> Result<Self, SocialError> {
        Statements::parse_tsv(text)?.into_graph(mode)
    }

    /// Reads N-Triples when the path ends in `.nt`, the compact TSV otherwise.
    pub fn load(path: impl AsRef<Path>, mode: LocationMode) -> Result<Self, SocialError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| SocialError::Io { path: path.display().to_string(), source })?;
        if path.extension().is_some_and(|e| e == "nt") {
            load_foaf(&crate::store::parse_ntriples(&text)?, mode)
        } else {
            SocialGraph::parse_tsv(&text, mode)
        }
    }

    pub fn persons(&self) -> impl ExactSizeIterator<Item = &PersonId> {
        self.persons.iter()
    }

    pub fn len(&self) -> usize {
        self.persons.len()
    }

    pub fn is_empty(&self) -> bool {
        self.persons.is_empty()
    }

    pub fn contains(&self, p: &PersonId) -> bool {
        self.persons.contains(p)
    }

    pub fn require(&self, p: &PersonId) -> Result<(), SocialError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(SocialError::UnknownPerson(p.to_string()))
        }
    }

    /// Undirected pairs `(a, b)` with `a < b`.
    pub fn knows_pairs(&self) -> impl ExactSizeIterator<Item = &(PersonId, PersonId)> {
        self.knows.iter()
    }

    /// The directed `knows` statements as loaded.
    pub fn statements(&self) -> impl ExactSizeIterator<Item = &(PersonId, PersonId)> {
        self.statements.iter()
    }

    pub fn knows(&self, a: &PersonId, b: &PersonId) -> bool {
        self.knows.contains(&ordered(a.clone(), b.clone()))
    }

    pub fn friends(&self, p: &PersonId) -> BTreeSet<&PersonId> {
        self.knows
            .iter()
            .filter_map(|(a, b)| {
                if a == p {
                    Some(b)
                } else if b == p {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn knows_degree(&self, p: &PersonId) -> usize {
        self.knows.iter().filter(|(a, b)| a == p || b == p).count()
    }

    pub fn interests(&self, p: &PersonId) -> impl Iterator<Item = &str> {
        self.interests.get(p).into_iter().flatten().map(String::as_str)
    }

    pub fn location(&self, p: &PersonId) -> Option<&str> {
        self.location.get(p).map(String::as_str)
    }

    /// Graph on all persons (in order) linking those with the same location.
    pub fn location_graph(&self) -> SimpleGraph {
        let persons: Vec<&PersonId> = self.persons.iter().collect();
        let mut g = SimpleGraph::new(persons.len());
        for i in 0..persons.len() {
            for j in i + 1..persons.len() {
                if self.location.get(persons[i]) == self.location.get(persons[j]) {
                    g.add_edge(i, j).expect("fresh pair of distinct nodes");
                }
            }
        }
        g
    }

    /// Graph on `members` (in the given order) linking those sharing an interest.
    pub fn interest_graph(&self, members: &[PersonId]) -> Result<SimpleGraph, SocialError> {
        for m in members {
            self.require(m)?;
        }
        let empty = BTreeSet::new();
        let sets: Vec<&BTreeSet<String>> = members.iter().map(|m| self.interests.get(m).unwrap_or(&empty)).collect();
        let mut g = SimpleGraph::new(members.len());
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                if members[i] != members[j] && !sets[i].is_disjoint(sets[j]) {
                    g.add_edge(i, j).expect("fresh pair of distinct nodes");
                }
            }
        }
        Ok(g)
    }

    /// Copy with an extra `knows` pair.
    pub fn with_knows(&self, a: &PersonId, b: &PersonId) -> Result<SocialGraph, SocialError> {
        self.require(a)?;
        self.require(b)?;
        if a == b || self.knows(a, b) {
            return Err(SocialError::AlreadyFriends(a.clone(), b.clone()));
        }
        let mut g = self.clone();
        g.knows.insert(ordered(a.clone(), b.clone()));
        g.statements.insert((a.clone(), b.clone()));
        Ok(g)
    }

    /// Copy where `p` also has `interest`. Adding a known interest changes nothing.
    pub fn with_interest(&self, p: &PersonId, interest: &str) -> Result<SocialGraph, SocialError> {
        self.require(p)?;
        let mut g = self.clone();
        g.interests.entry(p.clone()).or_default().insert(interest.trim().to_string());
        Ok(g)
    }
}
