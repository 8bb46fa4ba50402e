// SPDX-License-Identifier: Apache-2.0

//! Brute-force reference implementations shared by the integration and
//! acceptance tests. Everything here enumerates; nothing is clever.

#![allow(dead_code)]

use contextrec::context::{Dimension, FormalContext, Item, Itemset};
use contextrec::graph::{Partition, SimpleGraph};
use contextrec::{Exact, Support};
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// All subsets of `items`.
pub fn powerset(items: &[Item]) -> Vec<Itemset> {
    (0u32..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, i)| i.clone()).collect())
        .collect()
}

pub fn count(rows: &[Itemset], x: &Itemset) -> usize {
    rows.iter().filter(|t| x.is_subset(t)).count()
}

pub fn support(rows: &[Itemset], x: &Itemset) -> Support {
    Support::new(count(rows, x) as u64, rows.len() as u64)
}

/// Galois closure; the universe when no row contains `x`.
pub fn closure(rows: &[Itemset], universe: &Itemset, x: &Itemset) -> Itemset {
    rows.iter().filter(|t| x.is_subset(t)).fold(universe.clone(), |acc, t| acc.intersection(t).cloned().collect())
}

/// Frequent closed sets with their minimal generators, found by scanning
/// every subset of the universe.
pub fn closed_with_generators(
    ctx: &FormalContext,
    minsup: Support,
) -> BTreeMap<Vec<Item>, (Support, BTreeSet<Vec<Item>>)> {
    let rows = ctx.transactions();
    let universe = ctx.universe();
    let items: Vec<Item> = universe.iter().cloned().collect();
    let mut out: BTreeMap<Vec<Item>, (Support, BTreeSet<Vec<Item>>)> = BTreeMap::new();
    for x in powerset(&items) {
        let c = closure(rows, universe, &x);
        let s = support(rows, &x);
        if s < minsup {
            continue;
        }
        let minimal = x.iter().all(|drop| {
            let mut smaller = x.clone();
            smaller.remove(drop);
            closure(rows, universe, &smaller) != c
        });
        let entry = out.entry(c.iter().cloned().collect()).or_insert_with(|| (s, BTreeSet::new()));
        if minimal {
            entry.1.insert(x.iter().cloned().collect());
        }
    }
    out
}

/// The generic basis by definition: premise `g` a minimal generator, `g ∪ c`
/// frequent and closed, conclusion non-empty, confidence at least `minconf`,
/// and no proper subset of `g` reaching `minconf` for the same closed set.
pub fn igb(
    ctx: &FormalContext,
    minsup: Support,
    minconf: Support,
) -> BTreeSet<(Vec<Item>, Vec<Item>, Support, Support)> {
    let rows = ctx.transactions();
    let closed = closed_with_generators(ctx, minsup);
    let mut generators: Vec<Itemset> = Vec::new();
    for (_, gens) in closed.values() {
        generators.extend(gens.iter().map(|g| g.iter().cloned().collect::<Itemset>()));
    }
    let mut rules = BTreeSet::new();
    for (target, (supp_i, _)) in &closed {
        let target: Itemset = target.iter().cloned().collect();
        for g in &generators {
            if !g.is_subset(&target) {
                continue;
            }
            let conclusion: Itemset = target.difference(g).cloned().collect();
            if conclusion.is_empty() {
                continue;
            }
            let conf = *supp_i / support(rows, g);
            if conf < minconf {
                continue;
            }
            let g_items: Vec<Item> = g.iter().cloned().collect();
            let shadowed = powerset(&g_items).into_iter().filter(|h| h.len() < g.len()).any(|h| {
                let c = count(rows, &h);
                c > 0 && *supp_i / Support::new(c as u64, rows.len() as u64) >= minconf
            });
            if !shadowed {
                rules.insert((g_items, conclusion.into_iter().collect(), *supp_i, conf));
            }
        }
    }
    rules
}

/// Random context over up to `max_items` items and `max_rows` rows. Items are
/// spread over the four dimensions; a row holds at most one value of each.
pub fn random_context(rng: &mut impl Rng, max_items: usize, max_rows: usize) -> FormalContext {
    let dims = [Dimension::LocationType, Dimension::Season, Dimension::DayPart, Dimension::Class];
    let n_items = rng.random_range(1..=max_items);
    let mut by_dim: Vec<Vec<Item>> = vec![Vec::new(); dims.len()];
    for k in 0..n_items {
        by_dim[k % dims.len()].push(Item::tagged(dims[k % dims.len()], &format!("v{k}")));
    }
    let n_rows = rng.random_range(1..=max_rows);
    let rows: Vec<Itemset> = (0..n_rows)
        .map(|_| {
            let mut row = Itemset::new();
            for values in by_dim.iter().filter(|v| !v.is_empty()) {
                if rng.random_bool(0.7) {
                    row.insert(values[rng.random_range(0..values.len())].clone());
                }
            }
            if row.is_empty() {
                row.insert(by_dim[0][0].clone());
            }
            row
        })
        .collect();
    FormalContext::new(rows).expect("one value per dimension")
}

/// Every set partition of `0..n`, as block-label vectors in restricted growth form.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().max().map_or(0, |m| m + 1);
        for label in 0..=next {
            prefix.push(label);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

pub fn to_partition(labels: &[usize]) -> Partition {
    let k = labels.iter().max().map_or(0, |m| m + 1);
    let mut blocks = vec![Vec::new(); k];
    for (v, &l) in labels.iter().enumerate() {
        blocks[l].push(v);
    }
    Partition::new(blocks, labels.len()).expect("valid labels")
}

/// Exact modularity of an unweighted graph under block labels.
pub fn modularity_exact(edges: &[(usize, usize)], n: usize, labels: &[usize]) -> Exact {
    let m = edges.len() as i128;
    let mut degree = vec![0i128; n];
    for &(u, v) in edges {
        degree[u] += 1;
        degree[v] += 1;
    }
    let k = labels.iter().max().map_or(0, |x| x + 1);
    let mut inside = vec![0i128; k];
    let mut total = vec![0i128; k];
    for &(u, v) in edges {
        if labels[u] == labels[v] {
            inside[labels[u]] += 1;
        }
    }
    for v in 0..n {
        total[labels[v]] += degree[v];
    }
    (0..k)
        .fold(Exact::from_integer(0), |q, c| q + Exact::new(inside[c], m) - Exact::new(total[c] * total[c], 4 * m * m))
}

/// Maximum modularity over every set partition, with one partition attaining it.
pub fn max_modularity(edges: &[(usize, usize)], n: usize) -> (Exact, Partition) {
    set_partitions(n)
        .into_iter()
        .map(|labels| (modularity_exact(edges, n, &labels), labels))
        .max_by(|a, b| a.0.cmp(&b.0))
        .map(|(q, labels)| (q, to_partition(&labels)))
        .expect("at least one partition")
}

pub fn labels_of(p: &Partition) -> Vec<usize> {
    p.membership()
}

/// Edge betweenness by listing every shortest path between every unordered
/// pair; each path adds `1 / (number of shortest paths)` to its edges.
pub fn betweenness_by_paths(edges: &[(usize, usize)], n: usize) -> BTreeMap<(usize, usize), Exact> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut score: BTreeMap<(usize, usize), Exact> =
        edges.iter().map(|&(u, v)| ((u.min(v), u.max(v)), Exact::from_integer(0))).collect();
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for t in s + 1..n {
            if dist[t] == usize::MAX {
                continue;
            }
            let mut paths = Vec::new();
            let mut stack = vec![vec![s]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                if last == t {
                    paths.push(path);
                    continue;
                }
                for &v in &adj[last] {
                    if dist[v] == dist[last] + 1 && dist[v] <= dist[t] {
                        let mut longer = path.clone();
                        longer.push(v);
                        stack.push(longer);
                    }
                }
            }
            let share = Exact::new(1, paths.len() as i128);
            for p in &paths {
                for w in p.windows(2) {
                    *score.get_mut(&(w[0].min(w[1]), w[0].max(w[1]))).unwrap() += share;
                }
            }
        }
    }
    score
}

/// Random simple graph on `n` nodes with edge probability `p`.
pub fn random_edges(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Random connected graph: a random spanning tree plus extra edges.
pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        edges.insert((u, v));
    }
    for e in random_edges(rng, n, p) {
        edges.insert(e);
    }
    edges.into_iter().collect()
}

pub fn graph(n: usize, edges: &[(usize, usize)]) -> SimpleGraph {
    SimpleGraph::from_edges(n, edges).expect("simple graph")
}

/// Two `k`-cliques joined by one bridge edge.
pub fn two_cliques(k: usize) -> (usize, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    for offset in [0, k] {
        for u in 0..k {
            for v in u + 1..k {
                edges.push((offset + u, offset + v));
            }
        }
    }
    edges.push((k - 1, k));
    (2 * k, edges)
}

pub fn complete(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}
