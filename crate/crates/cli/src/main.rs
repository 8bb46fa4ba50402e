// SPDX-License-Identifier: Apache-2.0

//! `contextrec`: rule mining, situation building, query enrichment,
//! community discovery, friend recommendation, evaluation and benchmarking.
//!
//! Results go to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 2 for usage, configuration or missing-file problems, 3 for data errors.

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::RunConfig;
use contextrec::community::{CommunityError, PowerMethod, DEFAULT_WALK_LENGTH};
use contextrec::context::{class_rules, generate_igb, mine_closed, write_rule_base, ContextError, FormalContext};
use contextrec::enrich::{
    cbr_select, enrich_query, parse_cases, Case, CbrConfig, EnrichError, KnowledgeBase, LearningBase, Provenance,
    RuleBase,
};
use contextrec::eval::{
    bench_compare, growth_stats, load_diary, load_judgments, mean_precision, precision_at_k, BenchConfig, EvalError,
    Place,
};
use contextrec::recommend::{apply_recommendations, discover_communities, recommend_friends, RecommendError};
use contextrec::situation::{
    build_situation, day_part_of, season_of, CivilTime, Gazetteer, GeoPoint, Situation, SituationError,
};
use contextrec::social::{LocationMode, PersonId, SocialError, SocialGraph};
use contextrec::store::{StoreError, TripleStore};
use contextrec::text::parse_fraction;
use contextrec::Support;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "contextrec", version, about = "Situation-aware query enrichment and friend recommendation")]
struct Cli {
    /// TOML configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine the generic basis of a context and write its class rules.
    Mine(MineArgs),
    /// Map a GPS fix and a local time to a situation.
    Situate(SituateArgs),
    /// Enrich a query with the interest predicted for the current situation.
    Enrich(EnrichArgs),
    /// Location and interest communities of a social graph.
    Communities(SocialArgs),
    /// Friends recommended to one person.
    Recommend(RecommendArgs),
    /// Precision over judgments, diary predictions and community growth.
    Evaluate(EvaluateArgs),
    /// Time Walktrap against Girvan-Newman on planted-partition graphs.
    Bench(BenchArgs),
}

#[derive(Args)]
struct MineArgs {
    #[arg(long)]
    context: Option<PathBuf>,
    /// Minimum support, e.g. `1/5` or `0.2`.
    #[arg(long)]
    minsup: Option<String>,
    /// Minimum confidence in (0, 1].
    #[arg(long)]
    minconf: Option<String>,
    /// Rule-base output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Fix {
    #[arg(long, allow_hyphen_values = true)]
    lat: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lon: Option<f64>,
    /// Local time, e.g. `2012-03-18T18:05`.
    #[arg(long)]
    time: String,
    /// Skip the gazetteer and use this location type.
    #[arg(long)]
    location_type: Option<String>,
    #[arg(long)]
    gazetteer: Option<PathBuf>,
}

#[derive(Args)]
struct SituateArgs {
    #[command(flatten)]
    fix: Fix,
}

#[derive(Args)]
struct EnrichArgs {
    query: String,
    #[command(flatten)]
    fix: Fix,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    store: Option<PathBuf>,
    /// Learning-base file, appended to when the knowledge base is used.
    #[arg(long)]
    learning_base: Option<PathBuf>,
    /// Hop bound for relating concepts to the location.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args)]
struct SocialArgs {
    /// Social graph, `.nt` or compact TSV.
    #[arg(long)]
    social: Option<PathBuf>,
    /// Random-walk length.
    #[arg(long)]
    t: Option<usize>,
    /// Keep the first of several locations instead of failing.
    #[arg(long)]
    lenient: bool,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct RecommendArgs {
    target: String,
    #[command(flatten)]
    social: SocialArgs,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    judgments: Option<PathBuf>,
    /// Judgments of a baseline system, reported alongside.
    #[arg(long)]
    baseline_judgments: Option<PathBuf>,
    /// Cut-off rank for precision.
    #[arg(long)]
    k: Option<usize>,
    /// Diary of situated queries to replay through enrichment and CBR.
    #[arg(long)]
    diary: Option<PathBuf>,
    #[arg(long)]
    cases: Option<PathBuf>,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    store: Option<PathBuf>,
    #[arg(long)]
    gazetteer: Option<PathBuf>,
    #[arg(long)]
    depth: Option<usize>,
    /// Accept every recommendation made to this person and report community growth.
    #[arg(long)]
    accept: Vec<String>,
    #[command(flatten)]
    social: SocialArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated node counts.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repetitions: Option<usize>,
    #[arg(long)]
    block_size: Option<usize>,
    #[arg(long)]
    p_in: Option<f64>,
    #[arg(long)]
    p_out: Option<f64>,
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value_t = Power::Sparse)]
    power: Power,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum Power {
    Dense,
    Sparse,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn data(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

macro_rules! classify {
    ($($ty:ty),*) => {$(
        impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                let io = matches!(std::error::Error::source(&e), Some(s) if s.is::<std::io::Error>());
                if io { Failure::usage(e.to_string()) } else { Failure::data(e.to_string()) }
            }
        }
    )*};
}

classify!(
    ContextError,
    SituationError,
    StoreError,
    EnrichError,
    SocialError,
    CommunityError,
    RecommendError,
    EvalError
);

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    let result = cli
        .config
        .as_deref()
        .map_or_else(|| Ok(RunConfig::default()), |p| RunConfig::load(p).map_err(Failure::usage))
        .and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command, cfg: &RunConfig) -> Outcome {
    match command {
        Command::Mine(a) => cmd_mine(a, cfg),
        Command::Situate(a) => cmd_situate(a, cfg),
        Command::Enrich(a) => cmd_enrich(a, cfg),
        Command::Communities(a) => cmd_communities(a, cfg),
        Command::Recommend(a) => cmd_recommend(a, cfg),
        Command::Evaluate(a) => cmd_evaluate(a, cfg),
        Command::Bench(a) => cmd_bench(a, cfg),
    }
}

/// The flag value, else the config value, else an error naming both.
fn pick<T: Clone>(flag: Option<T>, configured: &Option<T>, what: &str) -> Result<T, Failure> {
    flag.or_else(|| configured.clone())
        .ok_or_else(|| Failure::usage(format!("missing {what}: pass --{what} or set it in the config")))
}

fn existing(path: PathBuf) -> Result<PathBuf, Failure> {
    if path.is_file() {
        Ok(path)
    } else {
        Err(Failure::usage(format!("{}: no such file", path.display())))
    }
}

fn path_arg(flag: Option<PathBuf>, configured: &Option<PathBuf>, what: &str) -> Result<PathBuf, Failure> {
    existing(pick(flag, configured, what)?)
}

fn threshold(raw: &str, what: &str) -> Result<Support, Failure> {
    let value = parse_fraction(raw).ok_or_else(|| Failure::usage(format!("--{what}: not a number: {raw:?}")))?;
    if value <= Support::from_integer(0) || value > Support::from_integer(1) {
        return Err(Failure::usage(format!("--{what} must be in (0, 1], got {raw}")));
    }
    Ok(value)
}

fn positive(value: usize, what: &str) -> Result<usize, Failure> {
    if value == 0 {
        Err(Failure::usage(format!("--{what} must be at least 1")))
    } else {
        Ok(value)
    }
}

fn out() -> std::io::StdoutLock<'static> {
    std::io::stdout().lock()
}

fn emit(text: &str) -> Outcome {
    out().write_all(text.as_bytes()).map_err(|e| Failure::data(format!("stdout: {e}")))
}

fn emit_rows<R: Serialize>(format: Format, rows: &[R], tsv: impl Fn(&R) -> String) -> Outcome {
    let mut text = String::new();
    for row in rows {
        match format {
            Format::Tsv => text.push_str(&tsv(row)),
            Format::Jsonl => {
                text.push_str(&serde_json::to_string(row).map_err(|e| Failure::data(e.to_string()))?);
            }
        }
        text.push('\n');
    }
    emit(&text)
}

fn cmd_mine(a: MineArgs, cfg: &RunConfig) -> Outcome {
    let path = path_arg(a.context, &cfg.paths.context, "context")?;
    let minsup = threshold(&pick(a.minsup, &cfg.params.minsup, "minsup")?, "minsup")?;
    let minconf = threshold(&pick(a.minconf, &cfg.params.minconf, "minconf")?, "minconf")?;
    let ctx = FormalContext::load(&path)?;
    let patterns = mine_closed(&ctx, minsup)?;
    let generic = generate_igb(&ctx, &patterns, minconf)?;
    let classes = class_rules(&generic);
    let table = write_rule_base(&classes);
    let summary = format!(
        "transactions\t{}\nitems\t{}\nminsup\t{minsup}\nminconf\t{minconf}\nclosed_itemsets\t{}\ngeneric_rules\t{}\nclass_rules\t{}\n",
        ctx.len(),
        ctx.universe().len(),
        patterns.len(),
        generic.len(),
        classes.len()
    );
    match a.out {
        Some(target) => {
            std::fs::write(&target, table).map_err(|e| Failure::usage(format!("{}: {e}", target.display())))?;
            emit(&summary)
        }
        None => {
            eprint!("{summary}");
            emit(&table)
        }
    }
}

fn situation_from(fix: &Fix, cfg: &RunConfig) -> Result<Situation, Failure> {
    let time = CivilTime::parse(&fix.time).map_err(|e| Failure::usage(e.to_string()))?;
    if let Some(location_type) = &fix.location_type {
        return Ok(Situation::new(location_type, season_of(&time), day_part_of(&time))?);
    }
    let (Some(lat), Some(lon)) = (fix.lat, fix.lon) else {
        return Err(Failure::usage("pass --lat and --lon, or --location-type"));
    };
    let point = GeoPoint::new(lat, lon).map_err(|e| Failure::usage(e.to_string()))?;
    let gazetteer = Gazetteer::load(path_arg(fix.gazetteer.clone(), &cfg.paths.gazetteer, "gazetteer")?)?;
    Ok(build_situation(&gazetteer, &point, &time)?)
}

fn cmd_situate(a: SituateArgs, cfg: &RunConfig) -> Outcome {
    let s = situation_from(&a.fix, cfg)?;
    emit(&format!("{}\t{}\t{}\n", s.location_type(), s.season().token(), s.day_part().token()))
}

fn load_store(flag: Option<PathBuf>, cfg: &RunConfig) -> Result<TripleStore, Failure> {
    let store = TripleStore::load(path_arg(flag, &cfg.paths.store, "store")?)?;
    Ok(match &cfg.params.category_prefix {
        Some(prefix) => store.with_category_prefix(prefix),
        None => store,
    })
}

fn load_rules(flag: Option<PathBuf>, cfg: &RunConfig) -> Result<RuleBase, Failure> {
    match flag.or_else(|| cfg.paths.rules.clone()) {
        Some(path) => Ok(RuleBase::load(existing(path)?)?),
        None => {
            log::warn!("no rule base given; every query goes to the knowledge base");
            Ok(RuleBase::default())
        }
    }
}

fn depth(flag: Option<usize>, cfg: &RunConfig) -> Result<usize, Failure> {
    positive(flag.or(cfg.params.depth).unwrap_or(2), "depth")
}

fn trace(result: &contextrec::enrich::EnrichmentResult) {
    eprintln!("situation\t{}", result.situation);
    match &result.provenance {
        Provenance::RuleMatch { rule_id, overlap, confidence, support } => {
            eprintln!("rule\t{rule_id}\toverlap {overlap}\tconfidence {confidence}\tsupport {support}");
        }
        Provenance::KnowledgeBase { concepts } => {
            let names: Vec<&str> = concepts.iter().map(|c| c.as_str()).collect();
            eprintln!("knowledge_base\t{}", names.join(" "));
        }
    }
    eprintln!("interest\t{}", result.interest);
}

fn cmd_enrich(a: EnrichArgs, cfg: &RunConfig) -> Outcome {
    if a.query.trim().is_empty() {
        return Err(Failure::usage("query is empty"));
    }
    let situation = situation_from(&a.fix, cfg)?;
    let rules = load_rules(a.rules, cfg)?;
    let store = load_store(a.store, cfg)?;
    let lb_path = a.learning_base.or_else(|| cfg.paths.learning_base.clone());
    let mut lb = match &lb_path {
        Some(p) => LearningBase::load(p)?,
        None => LearningBase::new(),
    };
    let kb = KnowledgeBase { store: &store, depth: depth(a.depth, cfg)? };
    let result = enrich_query(&a.query, &situation, &rules, kb, &mut lb)?;
    trace(&result);
    emit(&format!("{}\n", result.enriched_query))?;
    match &lb_path {
        Some(p) => {
            let written = lb.persist(p)?;
            if written > 0 {
                eprintln!("learning_base\t+{written}\t{}", p.display());
            }
        }
        None if !lb.pending().is_empty() => log::warn!("no learning-base path; new entry not saved"),
        None => {}
    }
    Ok(())
}

struct Social {
    graph: SocialGraph,
    t: usize,
}

fn load_social(a: &SocialArgs, cfg: &RunConfig) -> Result<Social, Failure> {
    let path = path_arg(a.social.clone(), &cfg.paths.social, "social")?;
    let lenient = a.lenient || cfg.mode.lenient_foaf.unwrap_or(false);
    let mode = if lenient { LocationMode::Lenient } else { LocationMode::Strict };
    let graph = SocialGraph::load(path, mode)?;
    let t = positive(a.t.or(cfg.params.t).unwrap_or(DEFAULT_WALK_LENGTH), "t")?;
    Ok(Social { graph, t })
}

#[derive(Serialize)]
struct CommunityRecord {
    level: String,
    location: String,
    interest: Option<String>,
    members: Vec<String>,
}

fn cmd_communities(a: SocialArgs, cfg: &RunConfig) -> Outcome {
    let social = load_social(&a, cfg)?;
    let rows: Vec<CommunityRecord> = discover_communities(&social.graph, social.t)?
        .into_iter()
        .map(|c| CommunityRecord {
            level: c.level.to_string(),
            location: c.label.location,
            interest: c.label.interest,
            members: c.members.iter().map(|m| m.to_string()).collect(),
        })
        .collect();
    emit_rows(a.format, &rows, |r| {
        format!("{}\t{}\t{}\t{}", r.level, r.location, r.interest.as_deref().unwrap_or("-"), r.members.join(","))
    })
}

#[derive(Serialize)]
struct RecommendationRecord {
    target: String,
    candidate: String,
    location: String,
    interest: Option<String>,
}

fn cmd_recommend(a: RecommendArgs, cfg: &RunConfig) -> Outcome {
    let social = load_social(&a.social, cfg)?;
    let target = PersonId::new(&a.target);
    let communities = discover_communities(&social.graph, social.t)?;
    let rec = recommend_friends(&social.graph, &communities, &target)?;
    let rows: Vec<RecommendationRecord> = rec
        .candidates
        .iter()
        .map(|(c, label)| RecommendationRecord {
            target: target.to_string(),
            candidate: c.to_string(),
            location: label.location.clone(),
            interest: label.interest.clone(),
        })
        .collect();
    emit_rows(a.social.format, &rows, |r| {
        format!("{}\t{}\t{}\t{}", r.target, r.candidate, r.location, r.interest.as_deref().unwrap_or("-"))
    })
}

/// One line of the evaluation report.
#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ReportRow {
    Precision {
        system: String,
        query: String,
        k: usize,
        value: String,
        decimal: f64,
    },
    Mean {
        system: String,
        k: usize,
        value: String,
        decimal: f64,
    },
    Diary {
        user: String,
        query: String,
        situation: String,
        predicted: Option<String>,
        source: String,
        truth: String,
        correct: bool,
        cbr: Option<String>,
    },
    Growth {
        community: String,
        members: usize,
        before: String,
        after: String,
        percent: Option<String>,
        decimal: Option<f64>,
    },
}

fn decimal(r: &Support) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn report_tsv(row: &ReportRow) -> String {
    match row {
        ReportRow::Precision { system, query, k, value, decimal } => {
            format!("precision\t{system}\t{query}\t{k}\t{value}\t{decimal:.4}")
        }
        ReportRow::Mean { system, k, value, decimal } => format!("mean\t{system}\t-\t{k}\t{value}\t{decimal:.4}"),
        ReportRow::Diary { user, query, situation, predicted, source, truth, correct, cbr } => format!(
            "diary\t{user}\t{query}\t{situation}\t{}\t{source}\t{truth}\t{correct}\t{}",
            predicted.as_deref().unwrap_or("-"),
            cbr.as_deref().unwrap_or("-")
        ),
        ReportRow::Growth { community, members, before, after, percent, decimal } => format!(
            "growth\t{community}\t{members}\t{before}\t{after}\t{}\t{}",
            percent.as_deref().unwrap_or("undefined"),
            decimal.map_or("undefined".to_string(), |d| format!("{d:.2}"))
        ),
    }
}

fn precision_rows(system: &str, path: PathBuf, k: usize, rows: &mut Vec<ReportRow>) -> Outcome {
    let judgments = load_judgments(path)?;
    let mut values = Vec::new();
    for j in &judgments {
        let p = precision_at_k(j, k)?;
        rows.push(ReportRow::Precision {
            system: system.to_string(),
            query: j.query_id.clone(),
            k,
            value: p.to_string(),
            decimal: decimal(&p),
        });
        values.push(p);
    }
    let mean = mean_precision(&values)?;
    rows.push(ReportRow::Mean { system: system.to_string(), k, value: mean.to_string(), decimal: decimal(&mean) });
    Ok(())
}

fn diary_rows(a: &EvaluateArgs, diary: PathBuf, cfg: &RunConfig, rows: &mut Vec<ReportRow>) -> Outcome {
    let records = load_diary(diary)?;
    let rules = load_rules(a.rules.clone(), cfg)?;
    let store = load_store(a.store.clone(), cfg)?;
    let gazetteer = match a.gazetteer.clone().or_else(|| cfg.paths.gazetteer.clone()) {
        Some(p) => Some(Gazetteer::load(existing(p)?)?),
        None => None,
    };
    let cases: Vec<Case> = match a.cases.clone().or_else(|| cfg.paths.cases.clone()) {
        Some(p) => {
            let p = existing(p)?;
            let text = std::fs::read_to_string(&p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))?;
            parse_cases(&text)?
        }
        None => Vec::new(),
    };
    let cbr_cfg =
        CbrConfig::new(cfg.params.cbr_weights.unwrap_or([1.0, 1.0, 1.0]), cfg.params.cbr_threshold.unwrap_or(2.0))
            .map_err(|e| Failure::usage(e.to_string()))?;
    let kb = KnowledgeBase { store: &store, depth: depth(a.depth, cfg)? };
    let mut lb = LearningBase::new();
    for r in records {
        let situation = match &r.place {
            Place::Type(t) => Situation::new(t, season_of(&r.time), day_part_of(&r.time))?,
            Place::Point(p) => {
                let gz = gazetteer.as_ref().ok_or_else(|| Failure::usage("diary has coordinates: pass --gazetteer"))?;
                build_situation(gz, p, &r.time)?
            }
        };
        let (predicted, source) = match enrich_query(&r.query, &situation, &rules, kb, &mut lb) {
            Ok(res) => {
                let source = match res.provenance {
                    Provenance::RuleMatch { rule_id, .. } => format!("rule:{rule_id}"),
                    Provenance::KnowledgeBase { .. } => "knowledge_base".to_string(),
                };
                (Some(res.interest), source)
            }
            Err(EnrichError::NoInterestFound { .. }) => (None, "none".to_string()),
            Err(e) => return Err(e.into()),
        };
        let truth = contextrec::store::label_key(&r.interest);
        let correct = predicted.as_deref().is_some_and(|p| contextrec::store::label_key(p) == truth);
        let cbr = cbr_select(&cases, &situation, &cbr_cfg).map(|(c, _)| c.interest.clone());
        rows.push(ReportRow::Diary {
            user: r.user,
            query: r.query,
            situation: situation.to_string(),
            predicted,
            source,
            truth,
            correct,
            cbr,
        });
    }
    Ok(())
}

fn growth_rows(a: &EvaluateArgs, cfg: &RunConfig, rows: &mut Vec<ReportRow>) -> Outcome {
    let social = load_social(&a.social, cfg)?;
    let communities = discover_communities(&social.graph, social.t)?;
    let mut after = social.graph.clone();
    for name in &a.accept {
        let target = PersonId::new(name);
        let rec = recommend_friends(&after, &communities, &target)?;
        let accepted: Vec<PersonId> = rec.candidates.iter().map(|(p, _)| p.clone()).collect();
        after = apply_recommendations(&after, &rec, &accepted)?;
    }
    for g in growth_stats(&social.graph, &after, &communities)? {
        let decimal = g.percent.map(|p| *p.numer() as f64 / *p.denom() as f64);
        rows.push(ReportRow::Growth {
            community: g.community,
            members: g.members,
            before: g.before.to_string(),
            after: g.after.to_string(),
            percent: g.percent.map(|p| p.to_string()),
            decimal,
        });
    }
    Ok(())
}

fn cmd_evaluate(a: EvaluateArgs, cfg: &RunConfig) -> Outcome {
    let k = positive(a.k.or(cfg.params.k).unwrap_or(10), "k")?;
    let mut rows = Vec::new();
    let mut any = false;
    if let Some(p) = a.judgments.clone().or_else(|| cfg.paths.judgments.clone()) {
        precision_rows("ours", existing(p)?, k, &mut rows)?;
        any = true;
    }
    if let Some(p) = a.baseline_judgments.clone().or_else(|| cfg.paths.baseline_judgments.clone()) {
        precision_rows("baseline", existing(p)?, k, &mut rows)?;
        any = true;
    }
    if let Some(p) = a.diary.clone().or_else(|| cfg.paths.diary.clone()) {
        diary_rows(&a, existing(p)?, cfg, &mut rows)?;
        any = true;
    }
    if !a.accept.is_empty() {
        growth_rows(&a, cfg, &mut rows)?;
        any = true;
    }
    if !any {
        return Err(Failure::usage("nothing to evaluate: pass --judgments, --diary or --accept"));
    }
    emit_rows(a.social.format, &rows, report_tsv)
}

fn cmd_bench(a: BenchArgs, cfg: &RunConfig) -> Outcome {
    let defaults = BenchConfig::default();
    let bench = BenchConfig {
        sizes: a.sizes.unwrap_or(defaults.sizes),
        block_size: a.block_size.unwrap_or(defaults.block_size),
        p_in: a.p_in.unwrap_or(defaults.p_in),
        p_out: a.p_out.unwrap_or(defaults.p_out),
        seed: a.seed.or(cfg.params.seed).unwrap_or(defaults.seed),
        repetitions: a.repetitions.unwrap_or(defaults.repetitions),
        walk_length: a.t.or(cfg.params.t).unwrap_or(defaults.walk_length),
        method: match a.power {
            Power::Dense => PowerMethod::Dense,
            Power::Sparse => PowerMethod::Sparse,
        },
    };
    bench.validate().map_err(|e| Failure::usage(e.to_string()))?;
    let rows = bench_compare(&bench)?;
    emit_rows(a.format, &rows, |r| {
        format!(
            "{}\t{}\t{}\t{:.6}\t{:.6}\t{}\t{}",
            r.algorithm, r.n, r.edges, r.median_seconds, r.modularity, r.communities, r.checksum
        )
    })
}
