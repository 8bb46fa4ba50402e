// SPDX-License-Identifier: Apache-2.0

//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion with
//! its wall time and limit, then fails if any criterion failed.

#[path = "../../core/tests/oracle/mod.rs"]
mod oracle;

use contextrec::community::{
    best_partition, edge_betweenness, girvan_newman, walktrap, TransitionModel, DEFAULT_WALK_LENGTH,
};
use contextrec::context::{generate_igb, mine_closed, FormalContext, Itemset};
use contextrec::enrich::{enrich_query, KnowledgeBase, LearningBase, Provenance, RuleBase};
use contextrec::eval::{bench_compare, growth_percent, Algorithm, BenchConfig};
use contextrec::recommend::{discover_communities, recommend_friends};
use contextrec::situation::{DayPart, Season, Situation};
use contextrec::social::{LocationMode, SocialGraph};
use contextrec::store::{parse_ntriples, serialize_ntriples};
use contextrec::{ExactGraph, Support};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<(), String>;

/// Name, time limit in seconds, check.
type Criterion = (&'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($msg)+));
        }
    };
}

/// Writes straight to the process stdout so the lines survive libtest's
/// output capture and show up in a plain `cargo test` run.
macro_rules! report {
    ($($arg:tt)+) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)+);
    }};
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn cli(args: &[&str]) -> Result<(String, String), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_contextrec")).args(args).output().map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    if !out.status.success() {
        return Err(format!("{args:?} exited with {}: {stderr}", out.status));
    }
    Ok((stdout, stderr))
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn ac1_enrichment_example() -> Check {
    let (gz, rules, store) = (path("gazetteer.tsv"), path("rules_r1_r5.tsv"), path("concepts.nt"));
    let (stdout, stderr) = cli(&[
        "enrich",
        "Mona Lisa",
        "--lat",
        "48.8606349",
        "--lon",
        "2.3375548",
        "--time",
        "2012-03-18T18:05",
        "--gazetteer",
        &gz,
        "--rules",
        &rules,
        "--store",
        &store,
    ])?;
    ensure!(stdout == "Mona Lisa art\n", "stdout was {stdout:?}");
    ensure!(stderr.contains("situation\t(musée,printemps,soir)"), "trace: {stderr}");
    ensure!(stderr.contains("rule\tR4\toverlap 2"), "trace: {stderr}");
    Ok(())
}

fn ac2_recommendation_example() -> Check {
    let social = path("social16.tsv");
    let (stdout, _) = cli(&["communities", "--social", &social])?;
    let mut location_sizes = Vec::new();
    let mut interest = Vec::new();
    for line in stdout.lines() {
        let cols: Vec<&str> = line.split('\t').collect();
        match cols[0] {
            "location" => location_sizes.push(cols[3].split(',').count()),
            "interest" => interest.push(format!("{}:{}", cols[2], cols[3])),
            other => return Err(format!("unexpected row kind {other}")),
        }
    }
    ensure!(location_sizes == [6, 3, 3, 4], "location sizes {location_sizes:?}");
    let expected = [
        "semantic_web:U1,U5",
        "research:U2,U3",
        "ai:U4,U6",
        "music:U7,U9,U10",
        "art:U8,U12,U13",
        "sport:U11,U16",
        "cinema:U14,U15",
    ];
    ensure!(interest == expected, "interest communities {interest:?}");
    let (stdout, _) = cli(&["recommend", "U8", "--social", &social])?;
    let got: BTreeSet<&str> = stdout.lines().map(|l| l.split('\t').nth(1).unwrap_or("")).collect();
    ensure!(got == BTreeSet::from(["U12", "U13"]), "recommended {got:?}");
    Ok(())
}

fn ac3_miner_oracle() -> Check {
    let mut contexts = vec![FormalContext::parse(&read("context.tsv")).map_err(|e| e.to_string())?];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    contexts.extend((0..200).map(|_| oracle::random_context(&mut rng, 10, 10)));
    let thresholds = [Support::new(1, 10), Support::new(1, 5), Support::new(1, 3), Support::new(1, 2)];
    for (k, ctx) in contexts.iter().enumerate() {
        let (minsup, minconf) = (thresholds[k % 4], thresholds[(k / 4) % 4] * 2);
        let mined: BTreeMap<_, _> = mine_closed(ctx, minsup)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|p| {
                let gens: BTreeSet<Vec<_>> = p.generators.iter().map(|g| g.iter().cloned().collect()).collect();
                (p.closed.iter().cloned().collect::<Vec<_>>(), (p.support, gens))
            })
            .collect();
        ensure!(mined == oracle::closed_with_generators(ctx, minsup), "closed sets differ on context {k}");
        let patterns = mine_closed(ctx, minsup).unwrap();
        let rules: BTreeSet<_> = generate_igb(ctx, &patterns, minconf)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|r| (r.premise.into_iter().collect(), r.conclusion.into_iter().collect(), r.support, r.confidence))
            .collect();
        ensure!(rules == oracle::igb(ctx, minsup, minconf), "generic basis differs on context {k}");
    }
    Ok(())
}

fn ac4_walktrap_and_gn_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for round in 0..600 {
        let n = 2 + round % 6;
        let p = rng.random_range(0.1..0.7);
        let edges = oracle::random_connected(&mut rng, n, p);
        let g = oracle::graph(n, &edges);
        let tm = TransitionModel::new(&g, DEFAULT_WALK_LENGTH).map_err(|e| e.to_string())?;
        for row in tm.p() {
            ensure!((row.iter().sum::<f64>() - 1.0).abs() <= 1e-12, "row sum on {edges:?}");
        }
        for i in 0..n {
            ensure!(tm.distance_sq(i, i).unwrap() == 0.0, "r_ii on {edges:?}");
            for j in 0..i {
                let (a, b) = (tm.distance_sq(i, j).unwrap(), tm.distance_sq(j, i).unwrap());
                ensure!((a - b).abs() <= 1e-12, "asymmetric r on {edges:?}");
            }
        }
        let merges = walktrap(&g, DEFAULT_WALK_LENGTH).map_err(|e| e.to_string())?.merges().len();
        ensure!(merges == n - 1, "{merges} merges for {n} nodes");
    }
    let (n, bridge) = oracle::two_cliques(3);
    for (n, edges) in [(n, bridge), (4, oracle::complete(4))] {
        let (best, _) = oracle::max_modularity(&edges, n);
        let g = oracle::graph(n, &edges);
        let found = [best_partition(&walktrap(&g, DEFAULT_WALK_LENGTH).unwrap()), girvan_newman(&g)];
        for p in found {
            let q = oracle::modularity_exact(&edges, n, &p.membership());
            let gap = (*(best - q).numer() as f64 / *(best - q).denom() as f64).abs();
            ensure!(gap < 1e-9, "Q gap {gap} on {edges:?}");
        }
    }
    Ok(())
}

fn ac5_betweenness_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=8 {
        for _ in 0..40 {
            let p = rng.random_range(0.15..0.8);
            let edges = oracle::random_edges(&mut rng, n, p);
            let g: ExactGraph = oracle::graph(n, &edges).cast();
            ensure!(edge_betweenness(&g) == oracle::betweenness_by_paths(&edges, n), "mismatch on {edges:?}");
        }
    }
    Ok(())
}

fn ac6_benchmark_direction() -> Check {
    let rows = bench_compare(&BenchConfig::default()).map_err(|e| e.to_string())?;
    let mut by_n: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for r in &rows {
        let slot = by_n.entry(r.n).or_default();
        match r.algorithm {
            Algorithm::Walktrap => slot.0 = r.median_seconds,
            Algorithm::GirvanNewman => slot.1 = r.median_seconds,
        }
        report!("  {}\tn={}\tm={}\t{:.6}s\tQ={:.4}", r.algorithm, r.n, r.edges, r.median_seconds, r.modularity);
    }
    ensure!(by_n.keys().copied().eq([100, 125, 150, 175, 200, 225]), "sizes {:?}", by_n.keys());
    for (n, (wt, gn)) in &by_n {
        ensure!(wt < gn, "walktrap {wt}s not faster than girvan-newman {gn}s at n={n}");
    }
    let (wt, gn) = by_n[&225];
    ensure!(gn / wt > 10.0, "ratio at n=225 only {:.1}", gn / wt);
    report!("  ratio at n=225: {:.0}x", gn / wt);
    Ok(())
}

fn ac7_precision_arithmetic() -> Check {
    let (stdout, _) = cli(&["evaluate", "--judgments", &path("judgments.tsv"), "--k", "10"])?;
    let values: Vec<&str> =
        stdout.lines().filter(|l| l.starts_with("precision\t")).map(|l| l.split('\t').nth(4).unwrap()).collect();
    let expected = ["1", "1/10", "1", "2/5", "4/5", "0", "1/10", "1/10", "1/5", "1"];
    ensure!(values == expected, "per-query precision {values:?}");
    ensure!(stdout.lines().any(|l| l == "mean\tours\t-\t10\t47/100\t0.4700"), "mean row missing: {stdout}");
    let g = growth_percent(Support::from_integer(257), Support::from_integer(287)).ok_or("growth undefined")?;
    let pct = *g.numer() as f64 / *g.denom() as f64;
    ensure!((pct - 11.673).abs() < 1e-3, "growth {pct}");
    ensure!((pct - 11.0).abs() <= 1.0, "growth {pct} not within 1 point of 11");
    Ok(())
}

fn ac8_property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    // Recommendations on random social graphs.
    for _ in 0..1000 {
        let n = rng.random_range(1..=12);
        let mut text = String::new();
        for p in 0..n {
            text.push_str(&format!("p{p}\tbased_near\tl{}\n", rng.random_range(0..2)));
            for topic in 0..3 {
                if rng.random_bool(0.4) {
                    text.push_str(&format!("p{p}\tinterest\tt{topic}\n"));
                }
            }
            for q in p + 1..n {
                if rng.random_bool(0.25) {
                    text.push_str(&format!("p{p}\tknows\tp{q}\n"));
                }
            }
        }
        let sg = SocialGraph::parse_tsv(&text, LocationMode::Strict).map_err(|e| e.to_string())?;
        let cs = discover_communities(&sg, DEFAULT_WALK_LENGTH).map_err(|e| e.to_string())?;
        for target in sg.persons() {
            for (c, _) in recommend_friends(&sg, &cs, target).map_err(|e| e.to_string())?.candidates {
                ensure!(&c != target && !sg.knows(target, &c), "{target} got {c}");
            }
        }
    }
    // Closure operator laws on random itemsets.
    for _ in 0..1000 {
        let ctx = oracle::random_context(&mut rng, 10, 10);
        let items: Vec<_> = ctx.universe().iter().cloned().collect();
        let x: Itemset = items.iter().filter(|_| rng.random_bool(0.3)).cloned().collect();
        let y: Itemset = x.iter().cloned().chain(items.iter().filter(|_| rng.random_bool(0.3)).cloned()).collect();
        let cx = ctx.closure(&x).unwrap();
        ensure!(x.is_subset(&cx), "not extensive");
        ensure!(ctx.closure(&cx).unwrap() == cx, "not idempotent");
        ensure!(cx.is_subset(&ctx.closure(&y).unwrap()), "not monotone");
    }
    // Enrichment determinism and a single learning-base entry per fallback.
    let rules = RuleBase::parse(&read("rules_r1_r5.tsv")).map_err(|e| e.to_string())?;
    let store = contextrec::store::TripleStore::parse(&read("concepts.nt")).map_err(|e| e.to_string())?;
    let kb = KnowledgeBase { store: &store, depth: 2 };
    for place in ["musée", "plage", "centre_commercial", "montagne"] {
        for season in [Season::Printemps, Season::Ete, Season::Automne, Season::Hiver] {
            for part in [DayPart::Matin, DayPart::Midi, DayPart::Soir] {
                let s = Situation::new(place, season, part).unwrap();
                for query in ["Mona Lisa", "sport", "Puma", "nothing"] {
                    let (mut a, mut b) = (LearningBase::new(), LearningBase::new());
                    let ra = enrich_query(query, &s, &rules, kb, &mut a).ok();
                    let rb = enrich_query(query, &s, &rules, kb, &mut b).ok();
                    ensure!(ra == rb && a == b, "nondeterministic on {query} at {s}");
                    let fallback = matches!(ra.map(|r| r.provenance), Some(Provenance::KnowledgeBase { .. }));
                    ensure!(a.pending().len() == usize::from(fallback), "learning base grew by {}", a.pending().len());
                }
            }
        }
    }
    // Learning-base persistence appends exactly once through the binary.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let lb = dir.path().join("lb.tsv");
    let lb_arg = lb.to_string_lossy().into_owned();
    let store_arg = path("concepts.nt");
    let args = [
        "enrich",
        "sport",
        "--location-type",
        "plage",
        "--time",
        "2012-01-02T11:00",
        "--store",
        &store_arg,
        "--learning-base",
        &lb_arg,
    ];
    cli(&args)?;
    let first = std::fs::read_to_string(&lb).map_err(|e| e.to_string())?;
    ensure!(first.lines().count() == 1, "learning base after one run: {first:?}");
    // N-Triples round trip.
    for name in ["concepts.nt", "foaf_ivan.nt"] {
        let triples = parse_ntriples(&read(name)).map_err(|e| e.to_string())?;
        let again = parse_ntriples(&serialize_ntriples(&triples)).map_err(|e| e.to_string())?;
        ensure!(triples == again, "{name} did not round-trip");
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("AC1 enrichment example", 1, ac1_enrichment_example),
        ("AC2 recommendation example", 1, ac2_recommendation_example),
        ("AC3 miner oracle", 30, ac3_miner_oracle),
        ("AC4 walktrap and girvan-newman oracle", 60, ac4_walktrap_and_gn_oracle),
        ("AC5 edge betweenness oracle", 30, ac5_betweenness_oracle),
        ("AC6 benchmark direction", 300, ac6_benchmark_direction),
        ("AC7 precision arithmetic", 1, ac7_precision_arithmetic),
        ("AC8 property suites", 60, ac8_property_suites),
    ];
    let mut failed = Vec::new();
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(()) if elapsed <= Duration::from_secs(limit) => Ok(()),
            Ok(()) => Err(format!("over the {limit}s limit")),
            Err(e) => Err(e),
        };
        match verdict {
            Ok(()) => report!("PASS {name} ({:.3}s, limit {limit}s)", elapsed.as_secs_f64()),
            Err(e) => {
                report!("FAIL {name} ({:.3}s, limit {limit}s): {e}", elapsed.as_secs_f64());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}
