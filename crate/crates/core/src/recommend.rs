// SPDX-License-Identifier: Apache-2.0

//! Friend recommendation from two nested community passes: first on shared
//! location, then on shared interests inside each location community.

use crate::community::{detect_communities, CommunityError};
use crate::graph::{connected_components, Partition};
use crate::social::{PersonId, SocialError, SocialGraph};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecommendError {
    #[error(transparent)]
    Social(#[from] SocialError),
    #[error(transparent)]
    Community(#[from] CommunityError),
    #[error("{candidate} was not recommended to {target}")]
    NotACandidate { target: PersonId, candidate: PersonId },
    #[error("location pass disagrees with the location classes: {0}")]
    Inconsistent(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Location,
    Interest,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Location => "location",
            Level::Interest => "interest",
        })
    }
}

/// Community label: the shared location and, for interest communities with
/// at least two members, their most common shared interest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommunityLabel {
    pub location: String,
    pub interest: Option<String>,
}

impl fmt::Display for CommunityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.interest.as_deref().unwrap_or("-"), self.location)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledCommunity {
    pub level: Level,
    pub label: CommunityLabel,
    /// Sorted, non-empty.
    pub members: Vec<PersonId>,
}

/// Location communities first, then the interest communities of each
/// location community in turn.
pub fn discover_communities(sg: &SocialGraph, t: usize) -> Result<Vec<LabeledCommunity>, RecommendError> {
    let persons: Vec<PersonId> = sg.persons().cloned().collect();
    let lg = sg.location_graph();
    let by_location = detect_communities(&lg, t)?;
    let classes = connected_components(&lg);
    if by_location != classes {
        return Err(RecommendError::Inconsistent(format!(
            "{} walk communities for {} locations",
            by_location.len(),
            classes.len()
        )));
    }
    let mut location_level = Vec::new();
    let mut interest_level = Vec::new();
    for block in by_location.blocks() {
        let members: Vec<PersonId> = block.iter().map(|&i| persons[i].clone()).collect();
        let location = sg.location(&members[0]).expect("every person has a location").to_string();
        let ig = sg.interest_graph(&members)?;
        let by_interest: Partition = detect_communities(&ig, t)?;
        for sub in by_interest.blocks() {
            let sub_members: Vec<PersonId> = sub.iter().map(|&i| members[i].clone()).collect();
            interest_level.push(LabeledCommunity {
                level: Level::Interest,
                label: CommunityLabel { location: location.clone(), interest: shared_interest(sg, &sub_members) },
                members: sub_members,
            });
        }
        location_level.push(LabeledCommunity {
            level: Level::Location,
            label: CommunityLabel { location, interest: None },
            members,
        });
    }
    location_level.extend(interest_level);
    Ok(location_level)
}

/// Most common interest held by at least two members; ties go to the
/// lexicographically smaller interest.
fn shared_interest(sg: &SocialGraph, members: &[PersonId]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for m in members {
        for interest in sg.interests(m) {
            *counts.entry(interest).or_default() += 1;
        }
    }
    let mut best: Option<(&str, usize)> = None;
    for (interest, count) in counts {
        if count >= 2 && best.is_none_or(|(_, c)| count > c) {
            best = Some((interest, count));
        }
    }
    best.map(|(i, _)| i.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recommendation {
    pub target: PersonId,
    /// Ordered by (label, person).
    pub candidates: Vec<(PersonId, CommunityLabel)>,
}

impl Recommendation {
    /// Lines `target  candidate  location_label  interest_label`.
    pub fn to_tsv(&self) -> String {
        self.candidates
            .iter()
            .map(|(c, label)| {
                format!("{}\t{}\t{}\t{}\n", self.target, c, label.location, label.interest.as_deref().unwrap_or("-"))
            })
            .collect()
    }
}

/// Members of the target's interest communities that the target does not
/// know yet. Only communities labelled with one of the target's interests count.
pub fn recommend_friends(
    sg: &SocialGraph,
    communities: &[LabeledCommunity],
    target: &PersonId,
) -> Result<Recommendation, RecommendError> {
    sg.require(target)?;
    let mut found: BTreeMap<(CommunityLabel, PersonId), ()> = BTreeMap::new();
    for c in communities {
        if c.level != Level::Interest || !c.members.contains(target) {
            continue;
        }
        let Some(interest) = &c.label.interest else { continue };
        if !sg.interests(target).any(|i| i == interest) {
            continue;
        }
        for m in &c.members {
            if m != target && !sg.knows(target, m) {
                found.insert((c.label.clone(), m.clone()), ());
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let candidates = found.into_keys().filter(|(_, p)| seen.insert(p.clone())).map(|(label, p)| (p, label)).collect();
    Ok(Recommendation { target: target.clone(), candidates })
}

/// Adds a `knows` pair between the target and each accepted candidate.
pub fn apply_recommendations(
    sg: &SocialGraph,
    rec: &Recommendation,
    accepted: &[PersonId],
) -> Result<SocialGraph, RecommendError> {
    let mut g = sg.clone();
    for a in accepted {
        if !rec.candidates.iter().any(|(c, _)| c == a) {
            return Err(RecommendError::NotACandidate { target: rec.target.clone(), candidate: a.clone() });
        }
        g = g.with_knows(&rec.target, a)?;
    }
    Ok(g)
}

/// Records a newly learnt interest; rerun discovery to see its effect.
pub fn interest_update(sg: &SocialGraph, person: &PersonId, interest: &str) -> Result<SocialGraph, RecommendError> {
    Ok(sg.with_interest(person, interest)?)
}
