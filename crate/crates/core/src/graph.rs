// SPDX-License-Identifier: Apache-2.0

//! Undirected simple graphs on nodes `0..n` and node partitions.

use crate::scalar::Scalar;
use petgraph::unionfind::UnionFind;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node {node} out of range for a graph of {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(usize, usize),
    #[error("edge {0}-{1} has a non-positive weight")]
    BadWeight(usize, usize),
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Undirected graph without self-loops or parallel edges. Weights default to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph<T = f64> {
    adjacency: Vec<BTreeMap<usize, T>>,
}

impl<T: Scalar> SimpleGraph<T> {
    pub fn new(n: usize) -> Self {
        SimpleGraph { adjacency: vec![BTreeMap::new(); n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.add_weighted_edge(u, v, T::one())
    }

    pub fn add_weighted_edge(&mut self, u: usize, v: usize, w: T) -> Result<(), GraphError> {
        let n = self.node_count();
        for node in [u, v] {
            if node >= n {
                return Err(GraphError::NodeOutOfRange { node, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if w <= T::zero() {
            return Err(GraphError::BadWeight(u, v));
        }
        if self.adjacency[u].contains_key(&v) {
            return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
        }
        self.adjacency[u].insert(v, w.clone());
        self.adjacency[v].insert(u, w);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Option<T> {
        let w = self.adjacency.get_mut(u)?.remove(&v)?;
        self.adjacency[v].remove(&u);
        Some(w)
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(BTreeMap::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacency.get(u).is_some_and(|a| a.contains_key(&v))
    }

    pub fn weight(&self, u: usize, v: usize) -> Option<&T> {
        self.adjacency.get(u)?.get(&v)
    }

    /// Neighbors of `u` in increasing order, with edge weights.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, &T)> {
        self.adjacency[u].iter().map(|(&v, w)| (v, w))
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].len()
    }

    /// Sum of incident edge weights.
    pub fn strength(&self, u: usize) -> T {
        self.adjacency[u].values().cloned().fold(T::zero(), |acc, w| acc + w)
    }

    pub fn total_weight(&self) -> T {
        self.edges().fold(T::zero(), |acc, (_, _, w)| acc + w.clone())
    }

    /// Edges `(u, v, w)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.adjacency.iter().enumerate().flat_map(|(u, a)| a.range(u + 1..).map(move |(&v, w)| (u, v, w)))
    }

    /// Induced subgraph on `nodes`, relabelled to `0..nodes.len()` in the given order.
    pub fn subgraph(&self, nodes: &[usize]) -> SimpleGraph<T> {
        let index: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = SimpleGraph::new(nodes.len());
        for (i, &u) in nodes.iter().enumerate() {
            for (v, w) in self.neighbors(u) {
                if let Some(&j) = index.get(&v) {
                    if i < j {
                        g.adjacency[i].insert(j, w.clone());
                        g.adjacency[j].insert(i, w.clone());
                    }
                }
            }
        }
        g
    }

    /// Same structure with weights converted to another scalar.
    pub fn cast<U: Scalar>(&self) -> SimpleGraph<U> {
        SimpleGraph {
            adjacency: self
                .adjacency
                .iter()
                .map(|a| {
                    a.iter().map(|(&v, w)| (v, U::from_f64(w.to_f64().unwrap_or(1.0)).unwrap_or_else(U::one))).collect()
                })
                .collect(),
        }
    }

    /// Parses TSV `u  v  [weight]`; the node count is one more than the largest id.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut n = 0;
        for (idx, line) in text.lines().enumerate() {
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let err = |reason: String| GraphError::Parse { line: idx + 1, reason };
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if !(2..=3).contains(&fields.len()) {
                return Err(err(format!("expected 2 or 3 columns, found {}", fields.len())));
            }
            let node = |s: &str| s.parse::<usize>().map_err(|_| err(format!("bad node id {s:?}")));
            let (u, v) = (node(fields[0])?, node(fields[1])?);
            let w = match fields.get(2) {
                Some(s) => {
                    s.parse::<f64>().ok().and_then(T::from_f64).ok_or_else(|| err(format!("bad weight {s:?}")))?
                }
                None => T::one(),
            };
            n = n.max(u + 1).max(v + 1);
            edges.push((idx + 1, u, v, w));
        }
        let mut g = SimpleGraph::new(n);
        for (line, u, v, w) in edges {
            g.add_weighted_edge(u, v, w).map_err(|e| GraphError::Parse { line, reason: e.to_string() })?;
        }
        Ok(g)
    }

    pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|source| GraphError::Io { path: path.display().to_string(), source })?;
        SimpleGraph::parse_edge_list(&text)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v, w) in self.edges() {
            if w.is_one() {
                let _ = writeln!(out, "{u}\t{v}");
            } else {
                let _ = writeln!(out, "{u}\t{v}\t{w}");
            }
        }
        out
    }
}

/// Disjoint blocks covering `0..n`. Blocks are sorted internally and ordered
/// by their smallest node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Self, GraphError> {
        let mut seen = vec![false; n];
        for block in &mut blocks {
            if block.is_empty() {
                return Err(GraphError::NotAPartition("empty block".into()));
            }
            block.sort_unstable();
            for &v in block.iter() {
                match seen.get_mut(v) {
                    None => return Err(GraphError::NodeOutOfRange { node: v, n }),
                    Some(true) => return Err(GraphError::NotAPartition(format!("node {v} appears twice"))),
                    Some(slot) => *slot = true,
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(GraphError::NotAPartition(format!("node {v} is not covered")));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Partition { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Partition { blocks: (0..n).map(|v| vec![v]).collect() }
    }

    pub fn whole(n: usize) -> Self {
        if n == 0 {
            Partition { blocks: Vec::new() }
        } else {
            Partition { blocks: vec![(0..n).collect()] }
        }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of every node.
    pub fn membership(&self) -> Vec<usize> {
        let mut out = vec![0; self.node_count()];
        for (c, block) in self.blocks.iter().enumerate() {
            for &v in block {
                out[v] = c;
            }
        }
        out
    }

    /// TSV `node  community_index`, one line per node in node order.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (v, c) in self.membership().into_iter().enumerate() {
            let _ = writeln!(out, "{v}\t{c}");
        }
        out
    }
}

/// Connected components as a partition.
pub fn connected_components<T: Scalar>(g: &SimpleGraph<T>) -> Partition {
    let n = g.node_count();
    let mut uf = UnionFind::<usize>::new(n);
    for (u, v, _) in g.edges() {
        uf.union(u, v);
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        groups.entry(uf.find(v)).or_default().push(v);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    blocks.sort_unstable_by_key(|b| b[0]);
    Partition { blocks }
}
