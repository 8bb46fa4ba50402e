// SPDX-License-Identifier: Apache-2.0

//! Evaluation: precision over relevance judgments, diary records, community
//! growth after accepted recommendations, and the Walktrap vs Girvan-Newman
//! benchmark on planted-partition graphs.

use crate::community::{detect_communities_with, girvan_newman, modularity, CommunityError, PowerMethod};
use crate::graph::SimpleGraph;
use crate::recommend::LabeledCommunity;
use crate::situation::{CivilTime, GeoPoint, SituationError};
use crate::social::{PersonId, SocialGraph};
use crate::text::natural_cmp;
use crate::{Exact, Support};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("precision is undefined for an empty result list")]
    EmptyReturned,
    #[error("mean of an empty list")]
    EmptyValues,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("before and after graphs have different persons")]
    PersonSetMismatch,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Community(#[from] CommunityError),
}

fn read(path: &Path) -> Result<String, EvalError> {
    std::fs::read_to_string(path).map_err(|source| EvalError::Io { path: path.display().to_string(), source })
}

/// `|relevant ∩ returned| / |returned|`.
pub fn precision<R: Ord>(returned: &BTreeSet<R>, relevant: &BTreeSet<R>) -> Result<Support, EvalError> {
    if returned.is_empty() {
        return Err(EvalError::EmptyReturned);
    }
    let hits = returned.intersection(relevant).count();
    Ok(Support::new(hits as u64, returned.len() as u64))
}

/// Ranked results of one query with the judged-relevant subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Judgment {
    pub query_id: String,
    returned: Vec<String>,
    relevant: BTreeSet<String>,
}

impl Judgment {
    pub fn new(query_id: &str, returned: Vec<String>, relevant: BTreeSet<String>) -> Result<Self, EvalError> {
        let unique: BTreeSet<&String> = returned.iter().collect();
        if unique.len() != returned.len() {
            return Err(EvalError::InvalidConfig(format!("query {query_id} returns a resource twice")));
        }
        Ok(Judgment { query_id: query_id.to_string(), returned, relevant })
    }

    pub fn returned(&self) -> &[String] {
        &self.returned
    }

    pub fn relevant(&self) -> &BTreeSet<String> {
        &self.relevant
    }
}

/// Precision over the first `min(k, |returned|)` results.
pub fn precision_at_k(j: &Judgment, k: usize) -> Result<Support, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    let prefix: BTreeSet<&String> = j.returned.iter().take(k).collect();
    let relevant: BTreeSet<&String> = j.relevant.iter().collect();
    precision(&prefix, &relevant)
}

pub fn mean_precision(values: &[Support]) -> Result<Support, EvalError> {
    if values.is_empty() {
        return Err(EvalError::EmptyValues);
    }
    let sum = values.iter().fold(Support::from_integer(0), |acc, v| acc + v);
    Ok(sum / Support::from_integer(values.len() as u64))
}

/// Reads TSV `query_id  rank  resource_id  relevant(0/1)`. Queries come back
/// in natural id order, results in rank order.
pub fn parse_judgments(text: &str) -> Result<Vec<Judgment>, EvalError> {
    let mut rows: BTreeMap<String, BTreeMap<u32, (String, bool)>> = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("query_id") {
            continue;
        }
        let err = |reason: String| EvalError::Parse { line: idx + 1, reason };
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [query, rank, resource, relevant] = fields[..] else {
            return Err(err(format!("expected 4 columns, found {}", fields.len())));
        };
        let rank: u32 = rank.parse().map_err(|_| err(format!("bad rank {rank:?}")))?;
        let relevant = match relevant {
            "1" => true,
            "0" => false,
            other => return Err(err(format!("relevance must be 0 or 1, got {other:?}"))),
        };
        let ranks = rows.entry(query.to_string()).or_default();
        if ranks.values().any(|(r, _)| r == resource) {
            return Err(err(format!("resource {resource} listed twice for query {query}")));
        }
        if ranks.insert(rank, (resource.to_string(), relevant)).is_some() {
            return Err(err(format!("rank {rank} repeated for query {query}")));
        }
    }
    let mut out: Vec<Judgment> = rows
        .into_iter()
        .map(|(query, ranks)| {
            let relevant = ranks.values().filter(|(_, r)| *r).map(|(id, _)| id.clone()).collect();
            let returned = ranks.into_values().map(|(id, _)| id).collect();
            Judgment { query_id: query, returned, relevant }
        })
        .collect();
    out.sort_by(|a, b| natural_cmp(&a.query_id, &b.query_id));
    Ok(out)
}

pub fn load_judgments(path: impl AsRef<Path>) -> Result<Vec<Judgment>, EvalError> {
    parse_judgments(&read(path.as_ref())?)
}

/// Where a diary query was issued.
#[derive(Clone, Debug, PartialEq)]
pub enum Place {
    Point(GeoPoint),
    /// Already mapped to a location type.
    Type(String),
}

/// One diary entry: who asked what, when, where, and with which interest.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryRecord {
    pub user: String,
    pub time: CivilTime,
    pub place: Place,
    pub interest: String,
    pub query: String,
}

/// Reads TSV `user  time  location  interest  query`; `location` is either
/// `lat,lon` or a location-type token.
pub fn parse_diary(text: &str) -> Result<Vec<QueryRecord>, EvalError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with("user\t") {
            continue;
        }
        let err = |reason: String| EvalError::Parse { line: idx + 1, reason };
        let fields: Vec<&str> = trimmed.split('\t').map(str::trim).collect();
        let [user, time, location, interest, query] = fields[..] else {
            return Err(err(format!("expected 5 columns, found {}", fields.len())));
        };
        if query.is_empty() {
            return Err(err("empty query".into()));
        }
        let time = CivilTime::parse(time).map_err(|e| err(e.to_string()))?;
        let place = match GeoPoint::parse(location) {
            Ok(p) => Place::Point(p),
            Err(SituationError::InvalidCoordinate { .. }) => return Err(err(format!("bad coordinate {location:?}"))),
            Err(_) => Place::Type(crate::text::normalize_token(location)),
        };
        out.push(QueryRecord {
            user: user.to_string(),
            time,
            place,
            interest: interest.to_string(),
            query: query.to_string(),
        });
    }
    Ok(out)
}

pub fn load_diary(path: impl AsRef<Path>) -> Result<Vec<QueryRecord>, EvalError> {
    parse_diary(&read(path.as_ref())?)
}

/// `(after − before) / before · 100`, or `None` when `before` is zero.
pub fn growth_percent(before: Support, after: Support) -> Option<Exact> {
    if *before.numer() == 0 {
        return None;
    }
    let to_exact = |s: Support| Exact::new(i128::from(*s.numer()), i128::from(*s.denom()));
    Some((to_exact(after) - to_exact(before)) / to_exact(before) * Exact::from_integer(100))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub community: String,
    pub members: usize,
    pub before: Support,
    pub after: Support,
    /// `None` when the members had no relation before.
    pub percent: Option<Exact>,
}

/// Average `knows` degree of each community's members before and after.
pub fn growth_stats(
    before: &SocialGraph,
    after: &SocialGraph,
    communities: &[LabeledCommunity],
) -> Result<Vec<GrowthRow>, EvalError> {
    if !before.persons().eq(after.persons()) {
        return Err(EvalError::PersonSetMismatch);
    }
    let average = |g: &SocialGraph, members: &[PersonId]| {
        let total: usize = members.iter().map(|m| g.knows_degree(m)).sum();
        Support::new(total as u64, members.len().max(1) as u64)
    };
    Ok(communities
        .iter()
        .map(|c| {
            let (b, a) = (average(before, &c.members), average(after, &c.members));
            GrowthRow {
                community: format!("{} {}", c.level, c.label),
                members: c.members.len(),
                before: b,
                after: a,
                percent: growth_percent(b, a),
            }
        })
        .collect())
}

/// Planted-partition generator and benchmark settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub block_size: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
    pub repetitions: usize,
    pub walk_length: usize,
    #[serde(skip)]
    pub method: PowerMethod,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![100, 125, 150, 175, 200, 225],
            block_size: 25,
            p_in: 0.4,
            p_out: 0.01,
            seed: 42,
            repetitions: 5,
            walk_length: crate::community::DEFAULT_WALK_LENGTH,
            method: PowerMethod::Sparse,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: &str| Err(EvalError::InvalidConfig(m.to_string()));
        if self.sizes.is_empty() || self.sizes.iter().any(|&n| n < 2) {
            return bad("sizes must be non-empty and at least 2");
        }
        if self.block_size == 0 {
            return bad("block size must be positive");
        }
        if !(0.0..=1.0).contains(&self.p_in) || !(0.0..=1.0).contains(&self.p_out) || self.p_in <= self.p_out {
            return bad("need 0 <= p_out < p_in <= 1");
        }
        if self.repetitions == 0 || self.walk_length == 0 {
            return bad("repetitions and walk length must be positive");
        }
        Ok(())
    }
}

/// Nodes in consecutive blocks of `block_size`; each pair is linked with
/// probability `p_in` inside a block and `p_out` across blocks.
pub fn planted_partition(n: usize, cfg: &BenchConfig) -> SimpleGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let mut g = SimpleGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let p = if u / cfg.block_size == v / cfg.block_size { cfg.p_in } else { cfg.p_out };
            if rng.random_bool(p) {
                g.add_edge(u, v).expect("each pair is visited once");
            }
        }
    }
    g
}

/// SHA-256 of the edge-list serialization, hex encoded.
pub fn graph_checksum(g: &SimpleGraph) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{}\n", g.node_count()));
    hasher.update(g.to_edge_list());
    hex::encode(hasher.finalize())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Walktrap,
    GirvanNewman,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Walktrap => "walktrap",
            Algorithm::GirvanNewman => "girvan_newman",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub edges: usize,
    pub median_seconds: f64,
    pub modularity: f64,
    pub communities: usize,
    pub checksum: String,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

/// For each size: one generated graph, both algorithms run on it one warm-up
/// plus `repetitions` timed times, sequentially on this thread.
pub fn bench_compare(cfg: &BenchConfig) -> Result<Vec<TimingRow>, EvalError> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for &n in &cfg.sizes {
        let g = planted_partition(n, cfg);
        let checksum = graph_checksum(&g);
        for algorithm in [Algorithm::Walktrap, Algorithm::GirvanNewman] {
            let run = || -> Result<_, EvalError> {
                Ok(match algorithm {
                    Algorithm::Walktrap => detect_communities_with(&g, cfg.walk_length, cfg.method)?,
                    Algorithm::GirvanNewman => girvan_newman(&g),
                })
            };
            let partition = run()?;
            let mut times = Vec::with_capacity(cfg.repetitions);
            for _ in 0..cfg.repetitions {
                let start = Instant::now();
                let p = run()?;
                times.push(start.elapsed().as_secs_f64());
                debug_assert_eq!(p, partition);
            }
            rows.push(TimingRow {
                algorithm,
                n,
                edges: g.edge_count(),
                median_seconds: median(times),
                modularity: modularity(&g, &partition),
                communities: partition.len(),
                checksum: checksum.clone(),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::community::DEFAULT_WALK_LENGTH;
    use crate::recommend::{apply_recommendations, discover_communities, recommend_friends};
    use crate::social::LocationMode;

    fn ratio(n: u64, d: u64) -> Support {
        Support::new(n, d)
    }

    fn set(items: &[u32]) -> BTreeSet<u32> {
        items.iter().copied().collect()
    }

    #[test]
    fn precision_examples() {
        let returned = set(&[1, 2, 3, 4, 5, 6, 7, 8, 9, 10]);
        assert_eq!(precision(&returned, &returned).unwrap(), ratio(1, 1));
        assert_eq!(precision(&returned, &set(&[])).unwrap(), ratio(0, 1));
        assert_eq!(precision(&returned, &set(&[1, 2, 3, 4, 5, 6, 7, 8, 42])).unwrap(), ratio(4, 5));
        assert!(matches!(precision(&set(&[]), &returned), Err(EvalError::EmptyReturned)));
    }

    #[test]
    fn precision_at_k_examples() {
        let returned: Vec<String> = (1..=10).map(|i| format!("r{i}")).collect();
        let relevant: BTreeSet<String> = returned[..8].iter().cloned().collect();
        let j = Judgment::new("q", returned, relevant).unwrap();
        assert_eq!(precision_at_k(&j, 10).unwrap(), ratio(4, 5));
        assert_eq!(precision_at_k(&j, 1).unwrap(), ratio(1, 1));
        assert_eq!(precision_at_k(&j, 50).unwrap(), ratio(4, 5));
        assert!(precision_at_k(&j, 0).is_err());
        assert!(Judgment::new("q", vec!["a".into(), "a".into()], BTreeSet::new()).is_err());
    }

    #[test]
    fn means() {
        assert_eq!(mean_precision(&[ratio(1, 1), ratio(4, 5)]).unwrap(), ratio(9, 10));
        assert_eq!(mean_precision(&[ratio(3, 7)]).unwrap(), ratio(3, 7));
        assert!(mean_precision(&[]).is_err());
    }

    #[test]
    fn judgment_file() {
        let text = "query_id\trank\tresource_id\trelevant\nq10\t1\ta\t1\nq2\t2\tb\t0\nq2\t1\tc\t1\n";
        let js = parse_judgments(text).unwrap();
        assert_eq!(js[0].query_id, "q2");
        assert_eq!(js[0].returned(), ["c", "b"]);
        assert!(parse_judgments("q\t1\ta\t1\nq\t1\tb\t0\n").is_err());
        assert!(parse_judgments("q\t1\ta\t1\nq\t2\ta\t0\n").is_err());
        assert!(parse_judgments("q\t1\ta\tyes\n").is_err());
    }

    #[test]
    fn diary_rows() {
        let text = "user\ttime\tlocation\tinterest\tquery\n1\tSam Dec 31 13:04:00 2011\tCentre commercial\tShopping\tPuma\n2\tDim Fev 5 16:30:00 2012\t48.8606349,2.3375548\tArt\tMonaLisa\n";
        let rows = parse_diary(text).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].place, Place::Type("centre_commercial".into()));
        assert!(matches!(rows[1].place, Place::Point(_)));
        assert!(parse_diary("1\t2012-01-01 10:00\t99.0,0.0\tArt\tq\n").is_err());
    }

    #[test]
    fn growth() {
        let pct = growth_percent(ratio(257, 1), ratio(287, 1)).unwrap();
        assert_eq!(pct, Exact::new(3000, 257));
        assert_eq!(growth_percent(ratio(0, 1), ratio(2, 1)), None);
        assert_eq!(growth_percent(ratio(3, 1), ratio(3, 1)), Some(Exact::from_integer(0)));
    }

    #[test]
    fn growth_rows_after_accepting() {
        let sg = SocialGraph::parse_tsv(include_str!("../../../fixtures/social16.tsv"), LocationMode::Strict).unwrap();
        let cs = discover_communities(&sg, DEFAULT_WALK_LENGTH).unwrap();
        let u8 = PersonId::new("U8");
        let rec = recommend_friends(&sg, &cs, &u8).unwrap();
        let accepted: Vec<PersonId> = rec.candidates.iter().map(|(p, _)| p.clone()).collect();
        let after = apply_recommendations(&sg, &rec, &accepted).unwrap();
        let rows = growth_stats(&sg, &after, &cs).unwrap();
        let sousse =
            rows.iter().find(|r| r.community.starts_with("location") && r.community.contains("sousse")).unwrap();
        // U8: 2 -> 4, U12: 1 -> 2, U13: 2 -> 3.
        assert_eq!(sousse.before, ratio(5, 3));
        assert_eq!(sousse.after, ratio(9, 3));
        assert_eq!(sousse.percent, Some(Exact::from_integer(80)));
        let unchanged = growth_stats(&sg, &sg, &cs).unwrap();
        assert!(unchanged.iter().all(|r| r.percent == Some(Exact::from_integer(0))));
    }

    #[test]
    fn isolated_users_growth_is_finite() {
        let text = "a\tbased_near\tx\nb\tbased_near\tx\nc\tbased_near\tx\na\tinterest\tk\nb\tinterest\tk\nc\tinterest\tk\nb\tknows\tc\n";
        let sg = SocialGraph::parse_tsv(text, LocationMode::Strict).unwrap();
        let cs = discover_communities(&sg, 4).unwrap();
        let rec = recommend_friends(&sg, &cs, &PersonId::new("a")).unwrap();
        let after = apply_recommendations(&sg, &rec, &[PersonId::new("b")]).unwrap();
        let rows = growth_stats(&sg, &after, &cs).unwrap();
        // Degrees 0,1,1 -> 1,2,1.
        assert_eq!(rows[0].percent, Some(Exact::from_integer(100)));
    }

    #[test]
    fn generation_is_seeded() {
        let cfg = BenchConfig::default();
        let a = planted_partition(100, &cfg);
        assert_eq!(graph_checksum(&a), graph_checksum(&planted_partition(100, &cfg)));
        let other = BenchConfig { seed: 7, ..cfg.clone() };
        assert_ne!(graph_checksum(&a), graph_checksum(&planted_partition(100, &other)));
    }

    #[test]
    fn tiny_bench() {
        let cfg = BenchConfig { sizes: vec![2, 30], repetitions: 1, ..BenchConfig::default() };
        let rows = bench_compare(&cfg).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows[0].communities >= 1 && rows[1].communities >= 1);
        assert!(bench_compare(&BenchConfig { sizes: vec![1], ..cfg.clone() }).is_err());
        assert!(bench_compare(&BenchConfig { p_in: 0.001, ..cfg }).is_err());
    }
}
