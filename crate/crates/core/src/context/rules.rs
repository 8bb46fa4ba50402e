// SPDX-License-Identifier: Apache-2.0

use super::{cmp_itemsets, format_itemset, ClosedPattern, ContextError, Dimension, FormalContext, Item, Itemset};
use crate::text::parse_fraction;
use crate::Support;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleKind {
    Generic,
    ClassRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssociationRule {
    pub premise: Itemset,
    pub conclusion: Itemset,
    pub support: Support,
    pub confidence: Support,
    pub kind: RuleKind,
}

impl AssociationRule {
    /// The class item of a class rule's conclusion.
    pub fn class(&self) -> Option<&Item> {
        self.conclusion.iter().find(|i| i.is_class())
    }

    fn order(&self, other: &Self) -> std::cmp::Ordering {
        cmp_itemsets(&self.premise, &other.premise).then_with(|| cmp_itemsets(&self.conclusion, &other.conclusion))
    }
}

impl fmt::Display for AssociationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} => {} (support {}, confidence {})",
            format_itemset(&self.premise),
            format_itemset(&self.conclusion),
            self.support,
            self.confidence
        )
    }
}

fn check_minconf(minconf: Support) -> Result<(), ContextError> {
    if minconf <= Support::from_integer(0) || minconf > Support::from_integer(1) {
        return Err(ContextError::InvalidThreshold(minconf));
    }
    Ok(())
}

/// Generic basis: for every frequent closed itemset `I` and every minimal
/// generator `g` of a frequent closed `f ⊆ I`, emits `g => I \ g` when the
/// conclusion is non-empty, `supp(I)/supp(g) >= minconf`, and no proper
/// subset of `g` already reaches `minconf` as a premise for `I`.
pub fn generate_igb(
    ctx: &FormalContext,
    patterns: &[ClosedPattern],
    minconf: Support,
) -> Result<Vec<AssociationRule>, ContextError> {
    check_minconf(minconf)?;
    let mut rules = Vec::new();
    for target in patterns {
        for source in patterns.iter().filter(|f| f.closed.is_subset(&target.closed)) {
            let confidence = target.support / source.support;
            if confidence < minconf {
                continue;
            }
            for gen in &source.generators {
                let conclusion: Itemset = target.closed.difference(gen).cloned().collect();
                if conclusion.is_empty() {
                    continue;
                }
                if has_confident_subset(ctx, gen, target.support, minconf) {
                    continue;
                }
                rules.push(AssociationRule {
                    premise: gen.clone(),
                    conclusion,
                    support: target.support,
                    confidence,
                    kind: RuleKind::Generic,
                });
            }
        }
    }
    rules.sort_by(AssociationRule::order);
    Ok(rules)
}

/// Whether some proper subset `g'` of `premise` gives `support / supp(g') >= minconf`.
fn has_confident_subset(ctx: &FormalContext, premise: &Itemset, support: Support, minconf: Support) -> bool {
    let items: Vec<&Item> = premise.iter().collect();
    let full = (1usize << items.len()) - 1;
    (0..full).any(|mask| {
        let subset: Itemset =
            items.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, i)| (*i).clone()).collect();
        let count = ctx.count(&subset);
        count > 0 && support / ctx.ratio(count) >= minconf
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// `X => Y` gives `X ∪ Z => Y \ Z` for `Z ⊂ Y`.
    Augmentation,
    /// `X => Y` gives `X => Z` for `Z ⊂ Y` with `closure(X ∪ Z) = X ∪ Y`.
    Decomposition,
}

/// Applies a derivation axiom; support and confidence are recomputed on `ctx`.
pub fn derive(
    ctx: &FormalContext,
    rule: &AssociationRule,
    mode: Derivation,
    subset: &Itemset,
) -> Result<AssociationRule, ContextError> {
    if subset.is_empty() || !subset.is_subset(&rule.conclusion) || subset.len() == rule.conclusion.len() {
        return Err(ContextError::Derivation(format!(
            "{} must be a non-empty proper subset of the conclusion {}",
            format_itemset(subset),
            format_itemset(&rule.conclusion)
        )));
    }
    let (premise, conclusion) = match mode {
        Derivation::Augmentation => (
            rule.premise.union(subset).cloned().collect::<Itemset>(),
            rule.conclusion.difference(subset).cloned().collect::<Itemset>(),
        ),
        Derivation::Decomposition => {
            let whole: Itemset = rule.premise.union(&rule.conclusion).cloned().collect();
            let grown: Itemset = rule.premise.union(subset).cloned().collect();
            if ctx.closure(&grown)? != whole {
                return Err(ContextError::Derivation(format!(
                    "closure of {} differs from {}",
                    format_itemset(&grown),
                    format_itemset(&whole)
                )));
            }
            (rule.premise.clone(), subset.clone())
        }
    };
    let whole: Itemset = premise.union(&conclusion).cloned().collect();
    let support = ctx.support(&whole)?;
    let premise_support = ctx.support(&premise)?;
    if premise_support == Support::from_integer(0) {
        return Err(ContextError::Derivation(format!("premise {} never occurs", format_itemset(&premise))));
    }
    Ok(AssociationRule { premise, conclusion, support, confidence: support / premise_support, kind: rule.kind })
}

/// Projects rules onto single-class conclusions. Rules with a class item in
/// the premise are dropped; duplicates keep the highest confidence, then the
/// highest support.
pub fn class_rules(rules: &[AssociationRule]) -> Vec<AssociationRule> {
    let mut best: BTreeMap<(Vec<Item>, Item), AssociationRule> = BTreeMap::new();
    for rule in rules {
        if rule.premise.iter().any(Item::is_class) {
            continue;
        }
        let Some(class) = rule.class() else { continue };
        let projected = AssociationRule {
            premise: rule.premise.clone(),
            conclusion: [class.clone()].into(),
            support: rule.support,
            confidence: rule.confidence,
            kind: RuleKind::ClassRule,
        };
        let key = (rule.premise.iter().cloned().collect(), class.clone());
        match best.get(&key) {
            Some(kept) if (kept.confidence, kept.support) >= (projected.confidence, projected.support) => {}
            _ => {
                best.insert(key, projected);
            }
        }
    }
    let mut out: Vec<_> = best.into_values().collect();
    out.sort_by(AssociationRule::order);
    out
}

/// Writes class rules as TSV `premise  class  support  confidence`, premise
/// tokens comma-separated (`-` for an empty premise).
pub fn write_rule_base(rules: &[AssociationRule]) -> String {
    let mut out = String::from("premise\tclass\tsupport\tconfidence\n");
    for rule in rules {
        let premise: Vec<&str> = rule.premise.iter().map(Item::value).collect();
        let premise = if premise.is_empty() { "-".to_string() } else { premise.join(",") };
        let class = rule.class().map_or("-", Item::value);
        out.push_str(&format!("{premise}\t{class}\t{}\t{}\n", rule.support, rule.confidence));
    }
    out
}

/// Reads the rule-base TSV. Premise tokens carry no dimension in the file;
/// it is recovered with [`Dimension::infer`].
pub fn parse_rule_base(text: &str) -> Result<Vec<AssociationRule>, ContextError> {
    let mut rules = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let row = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || (rules.is_empty() && trimmed.starts_with("premise\t")) {
            continue;
        }
        let err = |reason: String| ContextError::Parse { row, reason };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(err(format!("expected 4 columns, found {}", fields.len())));
        }
        let mut premise = Itemset::new();
        if fields[0] != "-" {
            for token in fields[0].split(',') {
                let item = Item::new(Dimension::infer(token), token).map_err(|e| err(e.to_string()))?;
                if premise.iter().any(|i| i.dimension() == item.dimension()) {
                    return Err(err(format!("premise repeats the {:?} dimension", item.dimension())));
                }
                premise.insert(item);
            }
        }
        let class = Item::new(Dimension::Class, fields[1]).map_err(|e| err(e.to_string()))?;
        let support = parse_fraction(fields[2]).ok_or_else(|| err(format!("bad support {:?}", fields[2])))?;
        let confidence = parse_fraction(fields[3]).ok_or_else(|| err(format!("bad confidence {:?}", fields[3])))?;
        if support > Support::from_integer(1)
            || confidence > Support::from_integer(1)
            || confidence == Support::from_integer(0)
        {
            return Err(err("support must be in [0,1] and confidence in (0,1]".into()));
        }
        rules.push(AssociationRule {
            premise,
            conclusion: [class].into(),
            support,
            confidence,
            kind: RuleKind::ClassRule,
        });
    }
    Ok(rules)
}
