// SPDX-License-Identifier: Apache-2.0

//! Random-walk community detection and the edge-betweenness baseline.
//!
//! Walktrap: node `i` is described by its `t`-step transition row `P^t_i.`;
//! two nodes are close when these rows differ little, each coordinate `k`
//! being scaled by `1/d(k)`. Starting from singletons, the adjacent pair of
//! communities with the smallest increase
//! `Δσ = (1/n)·(|C1||C2|/(|C1|+|C2|))·r²(C1,C2)` is merged, where a
//! community's row is the mean of its members' rows. The cut of the
//! resulting hierarchy is the level of highest modularity.

use crate::graph::{connected_components, GraphError, Partition, SimpleGraph};
use crate::scalar::{cmp_tol, Scalar};
use num_traits::Float;
use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommunityError {
    #[error("node {0} has no incident edge")]
    IsolatedNode(usize),
    #[error("walk length must be at least 1")]
    ZeroWalkLength,
    #[error("graph has {0} connected components; run each one separately")]
    Disconnected(usize),
    #[error("node {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("level {level} out of range, the hierarchy has {levels} levels")]
    LevelOutOfRange { level: usize, levels: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// How `P^t` is computed. Both give the same matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PowerMethod {
    /// Repeated dense matrix products, `O(n³·t)`.
    #[default]
    Dense,
    /// One walk vector per start node pushed along the edges, `O(n·(n+m)·t)`.
    Sparse,
}

pub const DEFAULT_WALK_LENGTH: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionModel<T> {
    p: Vec<Vec<T>>,
    pt: Vec<Vec<T>>,
    degree: Vec<T>,
    t: usize,
}

impl<T: Scalar> TransitionModel<T> {
    pub fn new(g: &SimpleGraph<T>, t: usize) -> Result<Self, CommunityError> {
        TransitionModel::with_method(g, t, PowerMethod::Dense)
    }

    pub fn with_method(g: &SimpleGraph<T>, t: usize, method: PowerMethod) -> Result<Self, CommunityError> {
        if t == 0 {
            return Err(CommunityError::ZeroWalkLength);
        }
        let n = g.node_count();
        let degree: Vec<T> = (0..n).map(|u| g.strength(u)).collect();
        if let Some(u) = (0..n).find(|&u| g.degree(u) == 0) {
            return Err(CommunityError::IsolatedNode(u));
        }
        let mut p = vec![vec![T::zero(); n]; n];
        for (u, row) in p.iter_mut().enumerate() {
            for (v, w) in g.neighbors(u) {
                row[v] = w.clone() / degree[u].clone();
            }
        }
        let pt = match method {
            PowerMethod::Dense => dense_power(&p, t),
            PowerMethod::Sparse => sparse_power(g, &degree, t),
        };
        Ok(TransitionModel { p, pt, degree, t })
    }

    pub fn n(&self) -> usize {
        self.p.len()
    }

    /// One-step transition matrix.
    pub fn p(&self) -> &[Vec<T>] {
        &self.p
    }

    /// `t`-step transition matrix.
    pub fn pt(&self) -> &[Vec<T>] {
        &self.pt
    }

    pub fn degree(&self, k: usize) -> &T {
        &self.degree[k]
    }

    pub fn walk_length(&self) -> usize {
        self.t
    }

    /// `r²_ij = Σ_k (P^t_ik − P^t_jk)² / d(k)`.
    pub fn distance_sq(&self, i: usize, j: usize) -> Result<T, CommunityError> {
        let n = self.n();
        for node in [i, j] {
            if node >= n {
                return Err(CommunityError::NodeOutOfRange { node, n });
            }
        }
        Ok(row_distance_sq(&self.pt[i], &self.pt[j], &self.degree))
    }
}

pub fn walk_distance<T: Scalar + Float>(tm: &TransitionModel<T>, i: usize, j: usize) -> Result<T, CommunityError> {
    tm.distance_sq(i, j).map(Float::sqrt)
}

fn dense_power<T: Scalar>(p: &[Vec<T>], t: usize) -> Vec<Vec<T>> {
    let n = p.len();
    let mut acc = p.to_vec();
    for _ in 1..t {
        let mut next = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut sum = T::zero();
                for k in 0..n {
                    sum = sum + acc[i][k].clone() * p[k][j].clone();
                }
                next[i][j] = sum;
            }
        }
        acc = next;
    }
    acc
}

fn sparse_power<T: Scalar>(g: &SimpleGraph<T>, degree: &[T], t: usize) -> Vec<Vec<T>> {
    let n = g.node_count();
    (0..n)
        .map(|start| {
            let mut v = vec![T::zero(); n];
            v[start] = T::one();
            for _ in 0..t {
                let mut next = vec![T::zero(); n];
                for (k, mass) in v.iter().enumerate() {
                    if mass.is_zero() {
                        continue;
                    }
                    for (j, w) in g.neighbors(k) {
                        next[j] = next[j].clone() + mass.clone() * w.clone() / degree[k].clone();
                    }
                }
                v = next;
            }
            v
        })
        .collect()
}

fn row_distance_sq<T: Scalar>(a: &[T], b: &[T], degree: &[T]) -> T {
    a.iter().zip(b).zip(degree).fold(T::zero(), |acc, ((x, y), d)| {
        let diff = x.clone() - y.clone();
        acc + diff.clone() * diff / d.clone()
    })
}

/// One agglomeration step. Blocks are named by their smallest node.
#[derive(Clone, Debug, PartialEq)]
pub struct Merge<T> {
    pub a: usize,
    pub b: usize,
    pub delta_sigma: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dendrogram<T> {
    n: usize,
    merges: Vec<Merge<T>>,
    modularity: Vec<T>,
}

impl<T: Scalar> Dendrogram<T> {
    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge<T>] {
        &self.merges
    }

    /// Level `l` is the partition after `l` merges; level 0 is all singletons.
    pub fn levels(&self) -> usize {
        self.modularity.len()
    }

    /// Modularity of every level.
    pub fn modularity(&self) -> &[T] {
        &self.modularity
    }

    pub fn partition_at(&self, level: usize) -> Result<Partition, CommunityError> {
        if level >= self.levels().max(1) {
            return Err(CommunityError::LevelOutOfRange { level, levels: self.levels() });
        }
        let mut blocks: BTreeMap<usize, Vec<usize>> = (0..self.n).map(|v| (v, vec![v])).collect();
        for m in &self.merges[..level] {
            let absorbed = blocks.remove(&m.b).expect("merged block exists");
            blocks.get_mut(&m.a).expect("merged block exists").extend(absorbed);
        }
        Ok(Partition::new(blocks.into_values().collect(), self.n)?)
    }

    /// Level of maximum modularity; the coarser level wins ties.
    pub fn best_level(&self) -> usize {
        let mut best = 0;
        for (level, q) in self.modularity.iter().enumerate() {
            if cmp_tol(q, &self.modularity[best]) != Ordering::Less {
                best = level;
            }
        }
        best
    }
}

pub fn best_partition<T: Scalar>(d: &Dendrogram<T>) -> Partition {
    d.partition_at(d.best_level()).expect("best level is in range")
}

pub fn walktrap<T: Scalar>(g: &SimpleGraph<T>, t: usize) -> Result<Dendrogram<T>, CommunityError> {
    walktrap_with(g, t, PowerMethod::Dense)
}

struct Community<T> {
    row: Vec<T>,
    size: usize,
    strength: T,
}

pub fn walktrap_with<T: Scalar>(
    g: &SimpleGraph<T>,
    t: usize,
    method: PowerMethod,
) -> Result<Dendrogram<T>, CommunityError> {
    if t == 0 {
        return Err(CommunityError::ZeroWalkLength);
    }
    let n = g.node_count();
    let components = connected_components(g).len();
    if components > 1 {
        return Err(CommunityError::Disconnected(components));
    }
    if n <= 1 {
        return Ok(Dendrogram { n, merges: Vec::new(), modularity: vec![T::zero(); n] });
    }
    let tm = TransitionModel::with_method(g, t, method)?;
    let inv_n = T::one() / T::from_count(n);
    let total = g.total_weight();
    let two_total = total.clone() + total.clone();

    let sigma = |a: &Community<T>, b: &Community<T>| {
        let (sa, sb) = (T::from_count(a.size), T::from_count(b.size));
        inv_n.clone() * (sa.clone() * sb.clone() / (sa + sb)) * row_distance_sq(&a.row, &b.row, &tm.degree)
    };

    let mut communities: BTreeMap<usize, Community<T>> =
        (0..n).map(|v| (v, Community { row: tm.pt[v].clone(), size: 1, strength: tm.degree[v].clone() })).collect();
    let mut between: BTreeMap<(usize, usize), T> = BTreeMap::new();
    let mut delta: BTreeMap<(usize, usize), T> = BTreeMap::new();
    for (u, v, w) in g.edges() {
        between.insert((u, v), w.clone());
        delta.insert((u, v), sigma(&communities[&u], &communities[&v]));
    }
    let mut q = communities.values().fold(T::zero(), |acc, c| {
        let a = c.strength.clone() / two_total.clone();
        acc - a.clone() * a
    });
    let mut modularity = vec![q.clone()];
    let mut merges = Vec::with_capacity(n - 1);

    while communities.len() > 1 {
        let mut best: Option<(&(usize, usize), &T)> = None;
        for (key, value) in &delta {
            if best.is_none_or(|(_, top)| cmp_tol(value, top) == Ordering::Less) {
                best = Some((key, value));
            }
        }
        let (&(a, b), delta_sigma) = best.map(|(k, v)| (k, v.clone())).expect("connected graph keeps an adjacent pair");
        delta.retain(|&(x, y), _| x != a && x != b && y != a && y != b);

        let cb = communities.remove(&b).expect("block b exists");
        let ca = communities.get_mut(&a).expect("block a exists");
        let w_ab = between.remove(&(a, b)).unwrap_or_else(T::zero);
        let (fa, fb) = (ca.strength.clone() / two_total.clone(), cb.strength.clone() / two_total.clone());
        q = q + w_ab / total.clone() - (fa.clone() * fb.clone() + fa * fb);
        let (sa, sb) = (T::from_count(ca.size), T::from_count(cb.size));
        let merged_size = sa.clone() + sb.clone();
        for (x, y) in ca.row.iter_mut().zip(&cb.row) {
            *x = (sa.clone() * x.clone() + sb.clone() * y.clone()) / merged_size.clone();
        }
        ca.size += cb.size;
        ca.strength = ca.strength.clone() + cb.strength;

        let moved: Vec<(usize, usize)> = between.keys().filter(|&&(x, y)| x == b || y == b).copied().collect();
        for key in moved {
            let w = between.remove(&key).expect("key just listed");
            let other = if key.0 == b { key.1 } else { key.0 };
            let slot = between.entry((a.min(other), a.max(other))).or_insert_with(T::zero);
            *slot = slot.clone() + w;
        }
        let neighbors: Vec<(usize, usize)> = between.keys().filter(|&&(x, y)| x == a || y == a).copied().collect();
        for key in neighbors {
            delta.insert(key, sigma(&communities[&key.0], &communities[&key.1]));
        }
        merges.push(Merge { a, b, delta_sigma });
        modularity.push(q.clone());
    }
    Ok(Dendrogram { n, merges, modularity })
}

/// `Q = Σ_c (e_c − a_c²)`: `e_c` the fraction of edge weight inside `c`,
/// `a_c` the fraction of edge endpoints in `c`. Zero for an edgeless graph.
pub fn modularity<T: Scalar>(g: &SimpleGraph<T>, p: &Partition) -> T {
    let total = g.total_weight();
    if total.is_zero() {
        return T::zero();
    }
    let two_total = total.clone() + total.clone();
    let membership = p.membership();
    let mut inside = vec![T::zero(); p.len()];
    let mut ends = vec![T::zero(); p.len()];
    for (u, v, w) in g.edges() {
        let (cu, cv) = (membership[u], membership[v]);
        if cu == cv {
            inside[cu] = inside[cu].clone() + w.clone();
        }
        ends[cu] = ends[cu].clone() + w.clone();
        ends[cv] = ends[cv].clone() + w.clone();
    }
    inside.into_iter().zip(ends).fold(T::zero(), |acc, (e, a)| {
        let a = a / two_total.clone();
        acc + e / total.clone() - a.clone() * a
    })
}

/// Shortest-path edge betweenness (hop distance) over all unordered node
/// pairs; a pair with several shortest paths splits its unit evenly.
pub fn edge_betweenness<T: Scalar>(g: &SimpleGraph<T>) -> BTreeMap<(usize, usize), T> {
    let sources: Vec<usize> = (0..g.node_count()).collect();
    let mut scores: BTreeMap<(usize, usize), T> = g.edges().map(|(u, v, _)| ((u, v), T::zero())).collect();
    accumulate_betweenness(g, &sources, &mut scores);
    scores
}

/// Adds the halved dependency of every source to `scores` (Brandes).
fn accumulate_betweenness<T: Scalar>(g: &SimpleGraph<T>, sources: &[usize], scores: &mut BTreeMap<(usize, usize), T>) {
    let n = g.node_count();
    let half = T::one() / T::from_count(2);
    let mut sigma = vec![T::zero(); n];
    let mut dist = vec![usize::MAX; n];
    let mut dependency = vec![T::zero(); n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &s in sources {
        let mut order = Vec::new();
        let mut queue = VecDeque::from([s]);
        dist[s] = 0;
        sigma[s] = T::one();
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for (w, _) in g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if dist[w] == dist[v] + 1 {
                    sigma[w] = sigma[w].clone() + sigma[v].clone();
                    preds[w].push(v);
                }
            }
        }
        for &w in order.iter().rev() {
            for &v in &preds[w] {
                let c = sigma[v].clone() / sigma[w].clone() * (T::one() + dependency[w].clone());
                let slot = scores.get_mut(&(v.min(w), v.max(w))).expect("edge is scored");
                *slot = slot.clone() + c.clone() * half.clone();
                dependency[v] = dependency[v].clone() + c;
            }
        }
        for &v in &order {
            sigma[v] = T::zero();
            dist[v] = usize::MAX;
            dependency[v] = T::zero();
            preds[v].clear();
        }
    }
}

fn component_of<T: Scalar>(g: &SimpleGraph<T>, start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut out = vec![start];
    seen[start] = true;
    let mut i = 0;
    while i < out.len() {
        for (w, _) in g.neighbors(out[i]) {
            if !seen[w] {
                seen[w] = true;
                out.push(w);
            }
        }
        i += 1;
    }
    out
}

/// Divisive baseline: remove the highest-betweenness edge (smallest edge on
/// ties), recompute, and keep the component structure of highest modularity
/// on the original graph (the earliest on ties). The intact structure counts.
pub fn girvan_newman<T: Scalar>(g: &SimpleGraph<T>) -> Partition {
    let mut h = g.clone();
    let mut best = connected_components(&h);
    let mut best_q = modularity(g, &best);
    let mut components = best.len();
    let mut scores = edge_betweenness(&h);
    while h.edge_count() > 0 {
        let mut top: Option<(&(usize, usize), &T)> = None;
        for (key, value) in &scores {
            if top.is_none_or(|(_, v)| cmp_tol(value, v) == Ordering::Greater) {
                top = Some((key, value));
            }
        }
        let (u, v) = *top.expect("edges remain").0;
        h.remove_edge(u, v);
        scores.remove(&(u, v));

        let mut seen = vec![false; h.node_count()];
        let mut affected = component_of(&h, u, &mut seen);
        if !seen[v] {
            affected.extend(component_of(&h, v, &mut seen));
        }
        for (key, value) in scores.iter_mut() {
            if seen[key.0] {
                *value = T::zero();
            }
        }
        accumulate_betweenness(&h, &affected, &mut scores);

        let now = connected_components(&h);
        if now.len() != components {
            components = now.len();
            let q = modularity(g, &now);
            if cmp_tol(&q, &best_q) == Ordering::Greater {
                best = now;
                best_q = q;
            }
        }
    }
    best
}

/// Walktrap on every connected component, isolated nodes as singletons.
pub fn detect_communities<T: Scalar>(g: &SimpleGraph<T>, t: usize) -> Result<Partition, CommunityError> {
    detect_communities_with(g, t, PowerMethod::Dense)
}

pub fn detect_communities_with<T: Scalar>(
    g: &SimpleGraph<T>,
    t: usize,
    method: PowerMethod,
) -> Result<Partition, CommunityError> {
    if t == 0 {
        return Err(CommunityError::ZeroWalkLength);
    }
    let mut blocks = Vec::new();
    for component in connected_components(g).blocks() {
        if component.len() == 1 {
            blocks.push(component.clone());
            continue;
        }
        let sub = g.subgraph(component);
        let local = best_partition(&walktrap_with(&sub, t, method)?);
        blocks.extend(local.blocks().iter().map(|b| b.iter().map(|&i| component[i]).collect()));
    }
    Ok(Partition::new(blocks, g.node_count())?)
}
