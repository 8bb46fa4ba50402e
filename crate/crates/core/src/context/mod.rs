// SPDX-License-Identifier: Apache-2.0

//! Transaction contexts over situation and interest items, closed itemset
//! mining and the generic rule basis derived from it.

mod mine;
mod rules;

pub use mine::{mine_closed, ClosedPattern};
pub use rules::{
    class_rules, derive, generate_igb, parse_rule_base, write_rule_base, AssociationRule, Derivation, RuleKind,
};

use crate::situation::{DayPart, Season};
use crate::text::normalize_token;
use crate::Support;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContextError {
    #[error("row {row}: {reason}")]
    Parse { row: usize, reason: String },
    #[error("item {0} is not in the context universe")]
    UnknownItem(String),
    #[error("empty item value")]
    EmptyItem,
    #[error("threshold must be in (0, 1], got {0}")]
    InvalidThreshold(Support),
    #[error("derivation precondition violated: {0}")]
    Derivation(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dimension {
    Season,
    DayPart,
    LocationType,
    Class,
}

impl Dimension {
    fn from_header(name: &str) -> Option<Dimension> {
        match normalize_token(name).as_str() {
            "season" => Some(Dimension::Season),
            "daypart" | "day_part" => Some(Dimension::DayPart),
            "location" | "location_type" => Some(Dimension::LocationType),
            "class" | "interest" => Some(Dimension::Class),
            _ => None,
        }
    }

    /// Dimension of a bare situation token: season and day-part vocabularies
    /// are closed, anything else is taken as a location type.
    pub fn infer(token: &str) -> Dimension {
        if Season::parse(token).is_some() {
            Dimension::Season
        } else if DayPart::parse(token).is_some() {
            Dimension::DayPart
        } else {
            Dimension::LocationType
        }
    }
}

/// A dimension-tagged, normalized token.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Item {
    dimension: Dimension,
    value: String,
}

impl Item {
    pub fn new(dimension: Dimension, raw: &str) -> Result<Self, ContextError> {
        let value = normalize_token(raw);
        if value.is_empty() {
            return Err(ContextError::EmptyItem);
        }
        Ok(Item { dimension, value })
    }

    /// Infallible constructor for known-good tokens.
    ///
    /// Panics on an empty token.
    pub fn tagged(dimension: Dimension, raw: &str) -> Self {
        Item::new(dimension, raw).expect("non-empty item token")
    }

    pub fn class(raw: &str) -> Self {
        Item::tagged(Dimension::Class, raw)
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn value(&self) -> &str {
        &self.value
    }

    pub fn is_class(&self) -> bool {
        self.dimension == Dimension::Class
    }
}

// Token order first so that listings read alphabetically.
impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value).then(self.dimension.cmp(&other.dimension))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.value)
    }
}

pub type Itemset = BTreeSet<Item>;

/// Size first, then lexicographic over the sorted items.
pub fn cmp_itemsets(a: &Itemset, b: &Itemset) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter()))
}

pub fn format_itemset(items: &Itemset) -> String {
    let tokens: Vec<&str> = items.iter().map(Item::value).collect();
    format!("{{{}}}", tokens.join(","))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct FormalContext {
    transactions: Vec<Itemset>,
    universe: Itemset,
}

impl FormalContext {
    /// Validates one item per dimension per transaction (so at most one class).
    pub fn new(transactions: Vec<Itemset>) -> Result<Self, ContextError> {
        for (i, t) in transactions.iter().enumerate() {
            check_one_per_dimension(t).map_err(|reason| ContextError::Parse { row: i + 1, reason })?;
        }
        let universe = transactions.iter().flatten().cloned().collect();
        Ok(FormalContext { transactions, universe })
    }

    pub fn transactions(&self) -> &[Itemset] {
        &self.transactions
    }

    pub fn universe(&self) -> &Itemset {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    fn check_known(&self, items: &Itemset) -> Result<(), ContextError> {
        match items.iter().find(|i| !self.universe.contains(*i)) {
            Some(unknown) => Err(ContextError::UnknownItem(unknown.to_string())),
            None => Ok(()),
        }
    }

    /// Number of transactions containing every item of `items`.
    pub(crate) fn count(&self, items: &Itemset) -> usize {
        self.transactions.iter().filter(|t| items.is_subset(t)).count()
    }

    /// Intersection of all transactions containing `items`; the whole
    /// universe when no transaction does.
    pub fn closure(&self, items: &Itemset) -> Result<Itemset, ContextError> {
        self.check_known(items)?;
        let mut extent = self.transactions.iter().filter(|t| items.is_subset(t));
        let Some(first) = extent.next() else {
            return Ok(self.universe.clone());
        };
        let mut closed = first.clone();
        for t in extent {
            closed.retain(|i| t.contains(i));
        }
        Ok(closed)
    }

    /// Relative support. An empty context gives every itemset support 0.
    pub fn support(&self, items: &Itemset) -> Result<Support, ContextError> {
        self.check_known(items)?;
        Ok(self.ratio(self.count(items)))
    }

    pub(crate) fn ratio(&self, count: usize) -> Support {
        if self.transactions.is_empty() {
            Support::from_integer(0)
        } else {
            Support::new(count as u64, self.transactions.len() as u64)
        }
    }

    /// Parses the TSV layout: a header naming one dimension per column
    /// (`season daypart location class`), then one transaction per row with
    /// `-` for an absent value. Row numbers in errors are 1-based file lines.
    pub fn parse(text: &str) -> Result<Self, ContextError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let Some((header_row, header)) = lines.next() else {
            return Ok(FormalContext::default());
        };
        let columns = header
            .split('\t')
            .map(|name| {
                Dimension::from_header(name).ok_or_else(|| ContextError::Parse {
                    row: header_row,
                    reason: format!("unknown column {:?}", name.trim()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;

        let mut transactions = Vec::new();
        for (row, line) in lines {
            let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
            if fields.len() != columns.len() {
                return Err(ContextError::Parse {
                    row,
                    reason: format!("expected {} columns, found {}", columns.len(), fields.len()),
                });
            }
            let mut t = Itemset::new();
            for (dim, value) in columns.iter().zip(fields) {
                if value == "-" || value.is_empty() {
                    continue;
                }
                t.insert(Item::new(*dim, value).map_err(|e| ContextError::Parse { row, reason: e.to_string() })?);
            }
            check_one_per_dimension(&t).map_err(|reason| ContextError::Parse { row, reason })?;
            transactions.push(t);
        }
        FormalContext::new(transactions)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ContextError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| ContextError::Io { path: path.display().to_string(), source })?;
        FormalContext::parse(&text)
    }
}

fn check_one_per_dimension(t: &Itemset) -> Result<(), String> {
    let mut seen = BTreeSet::new();
    for item in t {
        if !seen.insert(item.dimension) {
            return Err(format!("more than one {:?} value", item.dimension));
        }
    }
    Ok(())
}
