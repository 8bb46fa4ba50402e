// SPDX-License-Identifier: Apache-2.0

//! Situation-aware query enrichment.
//!
//! A query is enriched with one interest token. The interest comes from the
//! best class rule whose premise agrees with the situation on at least two
//! dimensions; without one, it is extracted from the concept store and the
//! new (situation, interest) pair is recorded in the learning base.

use crate::context::{AssociationRule, ContextError, Item, RuleKind};
use crate::scalar::{cmp_tol, Scalar};
use crate::situation::{overlap, DayPart, Season, Situation, SituationError};
use crate::store::{concept_by_label, extract_interest, interest_token, most_frequent, Iri, StoreError, TripleStore};
use crate::text::{normalize_token, surface_form};
use crate::Support;
use std::cmp::Ordering;
use std::fmt;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EnrichError {
    #[error("query is empty")]
    EmptyQuery,
    #[error("no interest found for {query:?} in situation {situation}: {reason}")]
    NoInterestFound { query: String, situation: Situation, reason: String },
    #[error("invalid rule base: {0}")]
    InvalidRuleBase(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error(transparent)]
    Context(#[from] ContextError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Situation(#[from] SituationError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> EnrichError + '_ {
    move |source| EnrichError::Io { path: path.display().to_string(), source }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleId(String);

impl RuleId {
    pub fn new(id: &str) -> Self {
        RuleId(id.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankedRule {
    pub id: RuleId,
    pub rule: AssociationRule,
}

impl RankedRule {
    pub fn interest(&self) -> &str {
        self.rule.class().map_or("", Item::value)
    }
}

/// Class rules in storage order, each with an id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleBase {
    rules: Vec<RankedRule>,
}

impl RuleBase {
    /// Ids are `R1`, `R2`, ... in the given order.
    pub fn new(rules: Vec<AssociationRule>) -> Result<Self, EnrichError> {
        RuleBase::with_ids(rules.into_iter().enumerate().map(|(i, r)| (RuleId(format!("R{}", i + 1)), r)).collect())
    }

    pub fn with_ids(rules: Vec<(RuleId, AssociationRule)>) -> Result<Self, EnrichError> {
        let mut seen = std::collections::BTreeSet::new();
        for (id, rule) in &rules {
            if !seen.insert(id.clone()) {
                return Err(EnrichError::InvalidRuleBase(format!("duplicate rule id {id}")));
            }
            if rule.kind != RuleKind::ClassRule || rule.conclusion.len() != 1 || rule.class().is_none() {
                return Err(EnrichError::InvalidRuleBase(format!("{id} does not conclude a single class")));
            }
            if rule.premise.iter().any(Item::is_class) {
                return Err(EnrichError::InvalidRuleBase(format!("{id} has a class item in its premise")));
            }
        }
        Ok(RuleBase { rules: rules.into_iter().map(|(id, rule)| RankedRule { id, rule }).collect() })
    }

    pub fn parse(text: &str) -> Result<Self, EnrichError> {
        RuleBase::new(crate::context::parse_rule_base(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EnrichError> {
        let path = path.as_ref();
        RuleBase::parse(&std::fs::read_to_string(path).map_err(io_error(path))?)
    }

    pub fn rules(&self) -> &[RankedRule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Scored<'a> {
    pub rule: &'a RankedRule,
    pub overlap: usize,
}

/// Rules whose premise agrees with `s` on at least two dimensions, in rule-base order.
pub fn eligible_rules<'a>(rb: &'a RuleBase, s: &Situation) -> Vec<Scored<'a>> {
    rb.rules
        .iter()
        .map(|rule| Scored { rule, overlap: overlap(s, &rule.rule.premise) })
        .filter(|scored| scored.overlap >= 2)
        .collect()
}

fn rank(a: &Scored<'_>, b: &Scored<'_>) -> Ordering {
    a.overlap
        .cmp(&b.overlap)
        .then_with(|| a.rule.rule.confidence.cmp(&b.rule.rule.confidence))
        .then_with(|| a.rule.rule.support.cmp(&b.rule.rule.support))
        .then_with(|| b.rule.id.cmp(&a.rule.id))
}

/// Highest (overlap, confidence, support); the smaller id on full ties.
pub fn select_rule<'a>(scored: &[Scored<'a>]) -> Option<Scored<'a>> {
    scored.iter().copied().max_by(rank)
}

/// One (situation, interest) case, shared by the learning base and the CBR baseline.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Case {
    pub situation: Situation,
    pub interest: String,
}

impl Case {
    pub fn new(situation: Situation, interest: &str) -> Result<Self, EnrichError> {
        let interest = normalize_token(interest);
        if interest.is_empty() {
            return Err(EnrichError::InvalidConfig("empty interest".into()));
        }
        Ok(Case { situation, interest })
    }
}

/// Parses TSV rows `location  season  daypart  interest`; `#` lines and an
/// optional `location` header are skipped.
pub fn parse_cases(text: &str) -> Result<Vec<Case>, EnrichError> {
    let mut cases = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("location\t") {
            continue;
        }
        let err = |reason: String| EnrichError::Parse { line: idx + 1, reason };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [location, season, day_part, interest] = fields[..] else {
            return Err(err(format!("expected 4 columns, found {}", fields.len())));
        };
        let season = Season::parse(season).ok_or_else(|| err(format!("unknown season {season:?}")))?;
        let day_part = DayPart::parse(day_part).ok_or_else(|| err(format!("unknown day part {day_part:?}")))?;
        let situation = Situation::new(location, season, day_part).map_err(|e| err(e.to_string()))?;
        cases.push(Case::new(situation, interest).map_err(|e| err(e.to_string()))?);
    }
    Ok(cases)
}

pub fn format_case(case: &Case) -> String {
    let s = &case.situation;
    format!("{}\t{}\t{}\t{}", s.location_type(), s.season().token(), s.day_part().token(), case.interest)
}

/// Append-only log of (situation, interest) pairs learnt from the fallback.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LearningBase {
    entries: Vec<Case>,
    persisted: usize,
}

impl LearningBase {
    pub fn new() -> Self {
        LearningBase::default()
    }

    pub fn parse(text: &str) -> Result<Self, EnrichError> {
        let entries = parse_cases(text)?;
        Ok(LearningBase { persisted: entries.len(), entries })
    }

    /// A missing file is an empty base.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, EnrichError> {
        let path = path.as_ref();
        match std::fs::read_to_string(path) {
            Ok(text) => LearningBase::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(LearningBase::new()),
            Err(e) => Err(io_error(path)(e)),
        }
    }

    pub fn entries(&self) -> &[Case] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, case: Case) {
        self.entries.push(case);
    }

    /// Entries added since the base was loaded or last persisted.
    pub fn pending(&self) -> &[Case] {
        &self.entries[self.persisted..]
    }

    /// Deterministic ordered append of another base's entries.
    pub fn merge(&mut self, other: &LearningBase) {
        self.entries.extend(other.entries.iter().cloned());
    }

    /// Appends the pending entries to `path` in one write.
    pub fn persist(&mut self, path: impl AsRef<Path>) -> Result<usize, EnrichError> {
        let path = path.as_ref();
        let pending = self.pending();
        if pending.is_empty() {
            return Ok(0);
        }
        let mut text = String::new();
        for case in pending {
            text.push_str(&format_case(case));
            text.push('\n');
        }
        let mut file = std::fs::OpenOptions::new().create(true).append(true).open(path).map_err(io_error(path))?;
        file.write_all(text.as_bytes()).map_err(io_error(path))?;
        let written = pending.len();
        self.persisted = self.entries.len();
        Ok(written)
    }
}

/// Concept store plus the hop bound used for the fallback.
#[derive(Clone, Copy, Debug)]
pub struct KnowledgeBase<'a> {
    pub store: &'a TripleStore,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    RuleMatch {
        rule_id: RuleId,
        overlap: usize,
        confidence: Support,
        support: Support,
    },
    /// Every concept returned by the extraction passes, repeats included.
    KnowledgeBase {
        concepts: Vec<Iri>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnrichmentResult {
    pub enriched_query: String,
    pub interest: String,
    pub provenance: Provenance,
    pub situation: Situation,
}

pub fn enrich_query(
    query: &str,
    situation: &Situation,
    rb: &RuleBase,
    kb: KnowledgeBase<'_>,
    lb: &mut LearningBase,
) -> Result<EnrichmentResult, EnrichError> {
    let query = query.trim();
    if query.is_empty() {
        return Err(EnrichError::EmptyQuery);
    }
    let (interest, provenance) = match select_rule(&eligible_rules(rb, situation)) {
        Some(best) => {
            log::info!("rule {} selected at overlap {}", best.rule.id, best.overlap);
            let provenance = Provenance::RuleMatch {
                rule_id: best.rule.id.clone(),
                overlap: best.overlap,
                confidence: best.rule.rule.confidence,
                support: best.rule.rule.support,
            };
            (best.rule.interest().to_string(), provenance)
        }
        None => {
            let (interest, concepts) = knowledge_base_interest(query, situation, kb)?;
            log::info!("no eligible rule; knowledge base gives {interest}");
            lb.push(Case::new(situation.clone(), &interest)?);
            (interest, Provenance::KnowledgeBase { concepts })
        }
    };
    Ok(EnrichmentResult {
        enriched_query: format!("{query} {}", surface_form(&interest)),
        interest,
        provenance,
        situation: situation.clone(),
    })
}

/// Runs the extraction at every depth from 1 to `kb.depth` and keeps the most
/// frequent concept, so concepts close to the location weigh more.
fn knowledge_base_interest(
    query: &str,
    situation: &Situation,
    kb: KnowledgeBase<'_>,
) -> Result<(String, Vec<Iri>), EnrichError> {
    let missing = |reason: String| EnrichError::NoInterestFound {
        query: query.to_string(),
        situation: situation.clone(),
        reason,
    };
    if kb.depth == 0 {
        return Err(EnrichError::InvalidConfig("depth must be at least 1".into()));
    }
    let concept = concept_by_label(kb.store, query).ok_or_else(|| missing("query matches no concept label".into()))?;
    let location = concept_by_label(kb.store, situation.location_type())
        .ok_or_else(|| missing(format!("location type {} matches no concept label", situation.location_type())))?;
    let mut concepts = Vec::new();
    for depth in 1..=kb.depth {
        concepts.extend(extract_interest(kb.store, &concept, &location, depth)?);
    }
    let best = most_frequent(&concepts).ok_or_else(|| missing("no related concept".into()))?;
    Ok((interest_token(kb.store, &best), concepts))
}

/// Per-dimension weights and acceptance threshold of the case-based baseline.
#[derive(Clone, Debug, PartialEq)]
pub struct CbrConfig<T> {
    weights: [T; 3],
    threshold: T,
}

impl<T: Scalar> CbrConfig<T> {
    /// Weights apply to (location type, season, day part).
    pub fn new(weights: [T; 3], threshold: T) -> Result<Self, EnrichError> {
        if weights.iter().any(|w| *w < T::zero()) {
            return Err(EnrichError::InvalidConfig("CBR weights must be non-negative".into()));
        }
        let total = weights.iter().cloned().fold(T::zero(), |acc, w| acc + w);
        if total <= T::zero() {
            return Err(EnrichError::InvalidConfig("CBR weights must not all be zero".into()));
        }
        if threshold < T::zero() {
            return Err(EnrichError::InvalidConfig("CBR threshold must be non-negative".into()));
        }
        Ok(CbrConfig { weights, threshold })
    }

    pub fn weights(&self) -> &[T; 3] {
        &self.weights
    }

    pub fn threshold(&self) -> &T {
        &self.threshold
    }

    pub fn score(&self, case: &Situation, s: &Situation) -> T {
        let matches =
            [case.location_type() == s.location_type(), case.season() == s.season(), case.day_part() == s.day_part()];
        matches.iter().zip(&self.weights).filter(|(m, _)| **m).fold(T::zero(), |acc, (_, w)| acc + w.clone())
    }
}

impl<T: Scalar> Default for CbrConfig<T> {
    fn default() -> Self {
        CbrConfig { weights: [T::one(), T::one(), T::one()], threshold: T::from_count(2) }
    }
}

/// The case maximizing the weighted equality score, if it reaches the
/// threshold. Ties keep the earliest case.
pub fn cbr_select<'a, T: Scalar>(cases: &'a [Case], s: &Situation, cfg: &CbrConfig<T>) -> Option<(&'a Case, T)> {
    let mut best: Option<(&Case, T)> = None;
    for case in cases {
        let score = cfg.score(&case.situation, s);
        if best.as_ref().is_none_or(|(_, top)| cmp_tol(&score, top) == Ordering::Greater) {
            best = Some((case, score));
        }
    }
    best.filter(|(_, score)| cmp_tol(score, &cfg.threshold) != Ordering::Less)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::context::Dimension;
    use num_rational::Ratio;

    const RULES: &str = include_str!("../../../fixtures/rules_r1_r5.tsv");
    const CONCEPTS: &str = include_str!("../../../fixtures/concepts.nt");

    fn sit(loc: &str, season: Season, day_part: DayPart) -> Situation {
        Situation::new(loc, season, day_part).unwrap()
    }

    fn rule(premise: &[&str], class: &str, support: (u64, u64), confidence: (u64, u64)) -> AssociationRule {
        AssociationRule {
            premise: premise.iter().map(|t| Item::tagged(Dimension::infer(t), t)).collect(),
            conclusion: [Item::class(class)].into(),
            support: Ratio::new(support.0, support.1),
            confidence: Ratio::new(confidence.0, confidence.1),
            kind: RuleKind::ClassRule,
        }
    }

    #[test]
    fn louvre_evening_only_r4() {
        let rb = RuleBase::parse(RULES).unwrap();
        let s = sit("musée", Season::Printemps, DayPart::Soir);
        let eligible = eligible_rules(&rb, &s);
        assert_eq!(eligible.len(), 1);
        assert_eq!(eligible[0].rule.id.as_str(), "R4");
        assert_eq!(eligible[0].overlap, 2);
        assert_eq!(select_rule(&eligible).unwrap().rule.id.as_str(), "R4");
    }

    #[test]
    fn beach_morning_matches_r2() {
        let rb = RuleBase::parse(RULES).unwrap();
        let s = sit("plage", Season::Ete, DayPart::Matin);
        let ids: Vec<&str> = eligible_rules(&rb, &s).iter().map(|x| x.rule.id.as_str()).collect();
        assert_eq!(ids, ["R2"]);
        assert!(eligible_rules(&RuleBase::default(), &s).is_empty());
    }

    #[test]
    fn selection_order() {
        let rb = RuleBase::new(vec![
            rule(&["plage", "été"], "surf", (1, 5), (4, 5)),
            rule(&["plage", "été"], "voile", (1, 5), (9, 10)),
            rule(&["plage", "matin"], "kite", (1, 5), (9, 10)),
        ])
        .unwrap();
        let s = sit("plage", Season::Ete, DayPart::Soir);
        assert_eq!(select_rule(&eligible_rules(&rb, &s)).unwrap().rule.id.as_str(), "R2");
        let tied = RuleBase::new(vec![
            rule(&["plage", "été"], "b", (1, 5), (1, 1)),
            rule(&["plage", "été"], "a", (1, 5), (1, 1)),
        ])
        .unwrap();
        let mut scored = eligible_rules(&tied, &s);
        assert_eq!(select_rule(&scored).unwrap().rule.id.as_str(), "R1");
        scored.reverse();
        assert_eq!(select_rule(&scored).unwrap().rule.id.as_str(), "R1");
        assert!(select_rule(&[]).is_none());
    }

    #[test]
    fn mona_lisa_via_rule() {
        let rb = RuleBase::parse(RULES).unwrap();
        let store = TripleStore::parse(CONCEPTS).unwrap();
        let mut lb = LearningBase::new();
        let s = sit("musée", Season::Printemps, DayPart::Soir);
        let out = enrich_query("Mona Lisa", &s, &rb, KnowledgeBase { store: &store, depth: 2 }, &mut lb).unwrap();
        assert_eq!(out.enriched_query, "Mona Lisa art");
        assert!(
            matches!(out.provenance, Provenance::RuleMatch { ref rule_id, overlap: 2, .. } if rule_id.as_str() == "R4")
        );
        assert!(lb.is_empty());
    }

    #[test]
    fn sport_at_the_beach_via_knowledge_base() {
        let store = TripleStore::parse(CONCEPTS).unwrap();
        let mut lb = LearningBase::new();
        let s = sit("plage", Season::Ete, DayPart::Matin);
        let kb = KnowledgeBase { store: &store, depth: 2 };
        let out = enrich_query("sport", &s, &RuleBase::default(), kb, &mut lb).unwrap();
        assert_eq!(out.interest, "beach_sports");
        assert_eq!(out.enriched_query, "sport beach sports");
        assert_eq!(lb.len(), 1);
        assert_eq!(lb.entries()[0], Case::new(s.clone(), "beach_sports").unwrap());
        let again = enrich_query("sport", &s, &RuleBase::default(), kb, &mut lb).unwrap();
        assert_eq!(again, out);
        assert_eq!(lb.len(), 2);
    }

    #[test]
    fn blank_and_unmappable_queries() {
        let store = TripleStore::parse(CONCEPTS).unwrap();
        let kb = KnowledgeBase { store: &store, depth: 2 };
        let mut lb = LearningBase::new();
        let s = sit("plage", Season::Ete, DayPart::Matin);
        assert!(matches!(enrich_query("   ", &s, &RuleBase::default(), kb, &mut lb), Err(EnrichError::EmptyQuery)));
        assert!(matches!(
            enrich_query("quantum chromodynamics", &s, &RuleBase::default(), kb, &mut lb),
            Err(EnrichError::NoInterestFound { .. })
        ));
        let nowhere = sit("volcan", Season::Ete, DayPart::Matin);
        assert!(matches!(
            enrich_query("sport", &nowhere, &RuleBase::default(), kb, &mut lb),
            Err(EnrichError::NoInterestFound { .. })
        ));
        assert!(lb.is_empty());
    }

    #[test]
    fn rule_base_validation() {
        let mut bad = rule(&["plage", "été"], "surf", (1, 5), (1, 1));
        bad.premise.insert(Item::class("art"));
        assert!(RuleBase::new(vec![bad]).is_err());
        let ok = rule(&["plage"], "surf", (1, 5), (1, 1));
        assert!(RuleBase::with_ids(vec![(RuleId::new("X"), ok.clone()), (RuleId::new("X"), ok)]).is_err());
    }

    #[test]
    fn learning_base_round_trip_and_persist() {
        let dir = std::env::temp_dir().join(format!("lb-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("lb.tsv");
        let _ = std::fs::remove_file(&path);
        let mut lb = LearningBase::load(&path).unwrap();
        lb.push(Case::new(sit("plage", Season::Ete, DayPart::Matin), "beach sports").unwrap());
        assert_eq!(lb.persist(&path).unwrap(), 1);
        assert_eq!(lb.persist(&path).unwrap(), 0);
        let reloaded = LearningBase::load(&path).unwrap();
        assert_eq!(reloaded.entries(), lb.entries());
        assert!(reloaded.pending().is_empty());
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn cbr_examples() {
        let cases = vec![Case::new(sit("musée", Season::Printemps, DayPart::Soir), "art").unwrap()];
        let s = sit("musée", Season::Hiver, DayPart::Soir);
        let (case, score) = cbr_select(&cases, &s, &CbrConfig::<f64>::default()).unwrap();
        assert_eq!(case.interest, "art");
        assert_eq!(score, 2.0);
        assert!(cbr_select(&cases, &s, &CbrConfig::new([1.0, 1.0, 1.0], 3.0).unwrap()).is_none());
        let day_only = CbrConfig::new([0.0, 0.0, 1.0], 0.0).unwrap();
        assert_eq!(cbr_select(&cases, &sit("plage", Season::Ete, DayPart::Soir), &day_only).unwrap().1, 1.0);
        assert!(CbrConfig::new([0.0, 0.0, 0.0], 1.0).is_err());
        assert!(CbrConfig::new([-1.0, 1.0, 1.0], 1.0).is_err());
    }

    #[test]
    fn cbr_ties_keep_first_and_exact_scalar_works() {
        let cases = vec![
            Case::new(sit("musée", Season::Ete, DayPart::Matin), "first").unwrap(),
            Case::new(sit("musée", Season::Ete, DayPart::Midi), "second").unwrap(),
        ];
        let cfg = CbrConfig::new([Ratio::new(1i128, 3), Ratio::new(1, 3), Ratio::new(1, 3)], Ratio::new(2, 3)).unwrap();
        let (case, score) = cbr_select(&cases, &sit("musée", Season::Ete, DayPart::Soir), &cfg).unwrap();
        assert_eq!(case.interest, "first");
        assert_eq!(score, Ratio::new(2, 3));
    }

    #[test]
    fn case_file_parsing() {
        let cases = parse_cases("location\tseason\tdaypart\tinterest\nplage\tété\tmatin\tsurf\n").unwrap();
        assert_eq!(cases.len(), 1);
        assert_eq!(format_case(&cases[0]), "plage\tété\tmatin\tsurf");
        assert!(parse_cases("plage\tmousson\tmatin\tsurf\n").is_err());
        assert!(parse_cases("plage\tété\tmatin\n").is_err());
    }
}
