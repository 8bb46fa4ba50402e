// SPDX-License-Identifier: Apache-2.0

//! Interest extraction from the concept graph.
//!
//! A query concept that is a category is expanded to its sub-categories
//! (reverse `skos:broader`); any other concept is expanded to its subject
//! categories (`dcterms:subject`). Candidates survive only if they are
//! related to the location concept, where "related" means reachable within
//! `depth` hops over `skos:broader` and `dcterms:subject` edges taken in
//! either direction.

use super::{vocab, Iri, Pattern, StoreError, Term, TripleStore};
use crate::text::normalize_token;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Comparison key for labels: case-folded, trimmed, `_` and spaces equivalent.
pub fn label_key(label: &str) -> String {
    normalize_token(&label.replace('_', " "))
}

/// The concept whose `rdfs:label` matches `label`; the smallest IRI on ties.
pub fn concept_by_label(store: &TripleStore, label: &str) -> Option<Iri> {
    let key = label_key(label);
    if key.is_empty() {
        return None;
    }
    store
        .with_predicate(vocab::RDFS_LABEL)
        .filter(|t| matches!(&t.object, Term::Literal { value, .. } if label_key(value) == key))
        .map(|t| t.subject.clone())
        .min()
}

/// A concept is a category if it is the object of some `skos:broader` edge
/// or lives in the category namespace.
pub fn is_category(store: &TripleStore, concept: &Iri) -> bool {
    concept.as_str().starts_with(store.category_prefix())
        || !store
            .query(&Pattern {
                subject: None,
                predicate: Some(Iri(vocab::SKOS_BROADER.to_string())),
                object: Some(Term::Iri(concept.clone())),
            })
            .is_empty()
}

pub fn extract_interest(
    store: &TripleStore,
    query_concept: &Iri,
    location_concept: &Iri,
    depth: usize,
) -> Result<Vec<Iri>, StoreError> {
    if depth == 0 {
        return Err(StoreError::Invalid("depth must be at least 1".into()));
    }
    for concept in [query_concept, location_concept] {
        if !store.mentions(concept) {
            return Err(StoreError::UnknownConcept(concept.to_string()));
        }
    }
    let near_location = neighborhood(store, location_concept, depth);
    let candidates: BTreeSet<Iri> = if is_category(store, query_concept) {
        subcategories(store, query_concept, depth)
    } else {
        store.objects(query_concept, vocab::DCTERMS_SUBJECT).filter_map(Term::as_iri).cloned().collect()
    };
    Ok(candidates.into_iter().filter(|c| near_location.contains(c)).collect())
}

/// Concepts within `depth` undirected broader/subject hops of `start`.
fn neighborhood(store: &TripleStore, start: &Iri, depth: usize) -> BTreeSet<Iri> {
    let mut adjacency: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    for predicate in [vocab::SKOS_BROADER, vocab::DCTERMS_SUBJECT] {
        for t in store.with_predicate(predicate) {
            if let Term::Iri(object) = &t.object {
                adjacency.entry(&t.subject).or_default().push(object);
                adjacency.entry(object).or_default().push(&t.subject);
            }
        }
    }
    bounded_bfs(start, depth, |node| adjacency.get(node).cloned().unwrap_or_default())
}

/// Categories with a `skos:broader` chain of length <= `depth` up to `category`.
fn subcategories(store: &TripleStore, category: &Iri, depth: usize) -> BTreeSet<Iri> {
    let broader = Iri(vocab::SKOS_BROADER.to_string());
    let mut found = bounded_bfs(category, depth, |node| {
        store
            .query(&Pattern { subject: None, predicate: Some(broader.clone()), object: Some(Term::Iri(node.clone())) })
            .into_iter()
            .map(|t| &t.subject)
            .collect()
    });
    found.remove(category);
    found
}

fn bounded_bfs<'a, F>(start: &'a Iri, depth: usize, mut next: F) -> BTreeSet<Iri>
where
    F: FnMut(&Iri) -> Vec<&'a Iri>,
{
    let mut seen: BTreeSet<Iri> = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((node, dist)) = queue.pop_front() {
        if dist == depth {
            continue;
        }
        for neighbor in next(node) {
            if seen.insert(neighbor.clone()) {
                queue.push_back((neighbor, dist + 1));
            }
        }
    }
    seen
}

/// The most frequent concept; ties go to the smallest IRI.
pub fn most_frequent(concepts: &[Iri]) -> Option<Iri> {
    let mut counts: BTreeMap<&Iri, usize> = BTreeMap::new();
    for c in concepts {
        *counts.entry(c).or_default() += 1;
    }
    let mut best: Option<(&Iri, usize)> = None;
    for (iri, count) in counts {
        if best.is_none_or(|(_, n)| count > n) {
            best = Some((iri, count));
        }
    }
    best.map(|(iri, _)| iri.clone())
}

/// Interest token for a concept: its smallest `rdfs:label`, normalized, or
/// the IRI's local name when it has no label.
pub fn interest_token(store: &TripleStore, concept: &Iri) -> String {
    store
        .objects(concept, vocab::RDFS_LABEL)
        .filter_map(|o| match o {
            Term::Literal { value, .. } => Some(normalize_token(value)),
            Term::Iri(_) => None,
        })
        .filter(|t| !t.is_empty())
        .min()
        .unwrap_or_else(|| normalize_token(&concept.local_name().replace('_', " ")))
}
