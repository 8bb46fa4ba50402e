// SPDX-License-Identifier: Apache-2.0

use super::{cmp_itemsets, ContextError, FormalContext, Item, Itemset};
use crate::Support;
use std::collections::BTreeMap;

/// A frequent closed itemset with every one of its minimal generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedPattern {
    pub closed: Itemset,
    pub support: Support,
    /// Sorted by size, then lexicographically.
    pub generators: Vec<Itemset>,
}

/// Mines all closed itemsets with support >= `minsup` together with their
/// minimal generators.
///
/// Minimal generators are exactly the free itemsets (support strictly below
/// that of every immediate subset) and they form a downward-closed family,
/// so they are enumerated level by level; each closed set is then the
/// closure of its generators. Output is sorted by size, then lexicographically.
pub fn mine_closed(ctx: &FormalContext, minsup: Support) -> Result<Vec<ClosedPattern>, ContextError> {
    if minsup <= Support::from_integer(0) || minsup > Support::from_integer(1) {
        return Err(ContextError::InvalidThreshold(minsup));
    }
    if ctx.is_empty() {
        return Ok(Vec::new());
    }
    let items: Vec<&Item> = ctx.universe().iter().collect();
    let rows = ctx.transactions();
    let tidsets: Vec<Vec<usize>> =
        items.iter().map(|item| (0..rows.len()).filter(|&t| rows[t].contains(*item)).collect()).collect();
    let frequent = |count: usize| ctx.ratio(count) >= minsup;

    let mut free: Vec<(Vec<usize>, Vec<usize>)> = vec![(Vec::new(), (0..rows.len()).collect())];
    let mut level: BTreeMap<Vec<usize>, Vec<usize>> = free.iter().cloned().collect();
    while !level.is_empty() {
        let mut next = BTreeMap::new();
        for (gen, tids) in &level {
            let start = gen.last().map_or(0, |last| last + 1);
            'candidates: for (item, item_tids) in tidsets.iter().enumerate().skip(start) {
                let mut candidate = gen.clone();
                candidate.push(item);
                let mut min_subset = tids.len();
                for skip in 0..gen.len() {
                    let subset: Vec<usize> =
                        candidate.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, &v)| v).collect();
                    match level.get(&subset) {
                        Some(sub_tids) => min_subset = min_subset.min(sub_tids.len()),
                        None => continue 'candidates,
                    }
                }
                let joined = intersect(tids, item_tids);
                if joined.len() < min_subset && frequent(joined.len()) {
                    next.insert(candidate, joined);
                }
            }
        }
        free.extend(next.iter().map(|(g, t)| (g.clone(), t.clone())));
        level = next;
    }

    let mut grouped: BTreeMap<Itemset, (usize, Vec<Itemset>)> = BTreeMap::new();
    for (gen, tids) in free {
        let mut closed = rows[tids[0]].clone();
        for &t in &tids[1..] {
            closed.retain(|i| rows[t].contains(i));
        }
        let generator: Itemset = gen.iter().map(|&i| items[i].clone()).collect();
        grouped.entry(closed).or_insert_with(|| (tids.len(), Vec::new())).1.push(generator);
    }

    let mut patterns: Vec<ClosedPattern> = grouped
        .into_iter()
        .map(|(closed, (count, mut generators))| {
            generators.sort_by(cmp_itemsets);
            ClosedPattern { closed, support: ctx.ratio(count), generators }
        })
        .collect();
    patterns.sort_by(|a, b| cmp_itemsets(&a.closed, &b.closed));
    Ok(patterns)
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len().min(b.len()));
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
