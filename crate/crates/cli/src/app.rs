//! Subcommand implementations: `query`, `verify`, `bench`, and `gen`.
//!
//! Coordinates come in as BED files partitioned by chromosome; one index is
//! built per chromosome, and only for chromosomes actually touched by a
//! query. Builds for distinct chromosomes run in parallel, capped by the
//! `ALLENQUERY_THREADS` environment variable (default: available
//! parallelism). All stdout output is UTF-8, LF-terminated, tab-separated,
//! and deterministic for fixed inputs; warnings go to stderr.
//!
//! The non-intersecting relations are exposed in two forms. `before`/`after`
//! (synonyms: `<`/`lt`, `>`/`gt`) require `--window L` and compile to a `d`
//! query against the flanking window of length `L`, reported under the
//! `<`/`>` symbol. `lt-all`/`gt-all` run the unbounded one-sided queries,
//! which usually report a very large share of the dataset and are therefore
//! behind the explicit `-all` names; the interval-tree structure cannot serve
//! them at all.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use allenquery_core::{
    oracle, window_after, window_before, AllenRelation, Coord, Dataset, PointId, PointStore,
    QueryInterval, WindowError, ALL_RELATIONS,
};
use anyhow::{anyhow, bail, Context, Result};

use crate::bench::{render_tsv, run_bench, BuiltStructure, StructureKind};
use crate::ingest::{
    self, synthesize, synthesize_queries, ChromosomePartition, StartDistribution, SyntheticConfig,
};

/// Environment variable capping parallel per-chromosome index builds.
pub const THREADS_ENV: &str = "ALLENQUERY_THREADS";

/// Hidden test hook: when set to a non-empty value other than `0`, `verify`
/// deliberately corrupts the primary structure's result sets so the
/// divergence path can be exercised end to end.
pub const VERIFY_FAULT_ENV: &str = "ALLENQUERY_VERIFY_FAULT";

/// Query engine selection: the three index structures plus the reference
/// linear-scan oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Index(StructureKind),
    Oracle,
}

impl FromStr for Structure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "oracle" {
            return Ok(Structure::Oracle);
        }
        StructureKind::from_str(s)
            .map(Structure::Index)
            .map_err(|_| format!("unknown structure {s:?} (expected rtfc, 2d-rt, it, or oracle)"))
    }
}

/// One relation as requested on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationSpec {
    /// One of the eleven intersection relations, answered directly.
    Plain(AllenRelation),
    /// `before`: `<` bounded to a window of the given length.
    WindowedBefore,
    /// `after`: `>` bounded to a window of the given length.
    WindowedAfter,
    /// `lt-all`: unbounded `<`.
    RawBefore,
    /// `gt-all`: unbounded `>`.
    RawAfter,
}

impl RelationSpec {
    pub fn parse(token: &str) -> Result<Self, String> {
        match token {
            "before" | "<" | "lt" => Ok(RelationSpec::WindowedBefore),
            "after" | ">" | "gt" => Ok(RelationSpec::WindowedAfter),
            "lt-all" => Ok(RelationSpec::RawBefore),
            "gt-all" => Ok(RelationSpec::RawAfter),
            other => match AllenRelation::from_str(other) {
                Ok(r) => Ok(RelationSpec::Plain(r)),
                Err(_) => Err(format!(
                    "unknown relation {other:?} (expected one of o, oi, d, di, m, mi, s, si, f, \
                     fi, eq/=, before/after (with --window), lt-all, gt-all)"
                )),
            },
        }
    }

    /// The symbol printed in the output's relation column.
    fn symbol(self) -> &'static str {
        match self {
            RelationSpec::Plain(r) => r.symbol(),
            RelationSpec::WindowedBefore | RelationSpec::RawBefore => "<",
            RelationSpec::WindowedAfter | RelationSpec::RawAfter => ">",
        }
    }

    fn is_windowed(self) -> bool {
        matches!(
            self,
            RelationSpec::WindowedBefore | RelationSpec::WindowedAfter
        )
    }

    fn is_raw(self) -> bool {
        matches!(self, RelationSpec::RawBefore | RelationSpec::RawAfter)
    }
}

/// Parse a relation list and validate it against the chosen structure and
/// window flag, rejecting bad combinations before any file is opened.
pub fn parse_relation_specs(
    tokens: &[String],
    structure: Structure,
    window: Option<Coord>,
) -> Result<Vec<RelationSpec>> {
    if tokens.is_empty() {
        bail!("at least one relation is required");
    }
    let mut specs = Vec::with_capacity(tokens.len());
    for token in tokens {
        let spec = RelationSpec::parse(token).map_err(|e| anyhow!(e))?;
        if spec.is_windowed() && window.is_none() {
            bail!(
                "relation {token:?} needs --window LENGTH (or use lt-all/gt-all for the \
                 unbounded forms)"
            );
        }
        if spec.is_raw() {
            if structure == Structure::Index(StructureKind::IntervalTree) {
                bail!(
                    "structure \"it\" cannot serve unbounded </> queries; choose another \
                     structure or use before/after with --window"
                );
            }
            eprintln!(
                "warning: {token} reports every interval strictly on that side of the query; \
                 result sets are usually very large"
            );
        }
        specs.push(spec);
    }
    if window == Some(0) {
        bail!("--window must be a positive length");
    }
    Ok(specs)
}

/// A per-chromosome query engine: the coordinate store plus either a built
/// index or the oracle marker.
enum Engine {
    Oracle,
    Index(BuiltStructure),
}

struct ChromIndex {
    store: PointStore,
    engine: Engine,
}

impl ChromIndex {
    fn answer(&self, data: &Dataset, relation: AllenRelation, q: QueryInterval) -> Vec<PointId> {
        match &self.engine {
            Engine::Oracle => oracle::scan(data, relation, q),
            Engine::Index(built) => built.query(&self.store, relation, q).0,
        }
    }
}

fn thread_cap() -> usize {
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        match raw.parse::<usize>() {
            Ok(n) if n >= 1 => return n,
            _ => eprintln!("warning: ignoring invalid {THREADS_ENV}={raw:?}"),
        }
    }
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Build indexes for exactly the chromosomes that appear in the query list,
/// in parallel across up to `ALLENQUERY_THREADS` workers.
fn build_touched_indexes(
    partition: &ChromosomePartition,
    touched: &[&String],
    structure: Structure,
) -> BTreeMap<String, ChromIndex> {
    let jobs: Vec<&String> = touched
        .iter()
        .copied()
        .filter(|name| partition.contains_key(*name))
        .collect();
    let workers = thread_cap().min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(String, ChromIndex)>> = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(name) = jobs.get(i) else { break };
                let data = &partition[*name];
                let store = PointStore::from_dataset(data);
                let engine = match structure {
                    Structure::Oracle => Engine::Oracle,
                    Structure::Index(kind) => Engine::Index(BuiltStructure::build(kind, &store)),
                };
                done.lock()
                    .expect("index builder panicked")
                    .push(((*name).clone(), ChromIndex { store, engine }));
            });
        }
    });
    done.into_inner()
        .expect("index builder panicked")
        .into_iter()
        .collect()
}

/// Resolve one (query, spec) pair to the effective relation and query
/// interval, or `None` (with a warning) when the window degenerates.
fn compile_query(
    spec: RelationSpec,
    chrom: &str,
    q: QueryInterval,
    window: Option<Coord>,
) -> Option<(AllenRelation, QueryInterval)> {
    match spec {
        RelationSpec::Plain(r) => Some((r, q)),
        RelationSpec::RawBefore => Some((AllenRelation::Before, q)),
        RelationSpec::RawAfter => Some((AllenRelation::After, q)),
        RelationSpec::WindowedBefore => {
            let length = window.expect("validated: windowed specs require --window");
            match window_before(q, length) {
                Ok(pair) => Some(pair),
                Err(WindowError::EmptyWindow) => {
                    eprintln!(
                        "warning: {chrom}:{}-{} starts at 0; no room for a before-window, \
                         reporting zero rows",
                        q.start(),
                        q.end()
                    );
                    None
                }
                Err(e) => {
                    eprintln!("warning: {chrom}:{}-{}: {e}; reporting zero rows", q.start(), q.end());
                    None
                }
            }
        }
        RelationSpec::WindowedAfter => {
            let length = window.expect("validated: windowed specs require --window");
            match window_after(q, length) {
                Ok(pair) => Some(pair),
                Err(e) => {
                    eprintln!("warning: {chrom}:{}-{}: {e}; reporting zero rows", q.start(), q.end());
                    None
                }
            }
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

pub struct QueryConfig {
    pub data: Vec<PathBuf>,
    pub queries: PathBuf,
    pub relations: Vec<String>,
    pub structure: Structure,
    pub window: Option<Coord>,
    pub strict: bool,
    pub output: Option<PathBuf>,
}

/// `query`: answer each (query, relation) pair and emit one TSV row per hit:
/// `query_chrom query_start query_end relation hit_chrom hit_start hit_end
/// hit_id`. Queries stay in input order; hits are sorted by
/// (start, end, id). A query on a chromosome absent from the data yields
/// zero rows.
pub fn cmd_query(config: &QueryConfig) -> Result<()> {
    let specs = parse_relation_specs(&config.relations, config.structure, config.window)?;
    let (partition, data_report) = ingest::ingest_files(&config.data, config.strict)?;
    eprintln!(
        "ingest report (data): {}",
        serde_json::to_string(&data_report)?
    );
    let (queries, query_report) = ingest::read_queries(&config.queries, config.strict)?;
    eprintln!(
        "ingest report (queries): {}",
        serde_json::to_string(&query_report)?
    );

    let mut touched: Vec<&String> = queries.iter().map(|(chrom, _)| chrom).collect();
    touched.sort();
    touched.dedup();
    let indexes = build_touched_indexes(&partition, &touched, config.structure);

    let mut out = open_output(&config.output)?;
    for (chrom, q) in &queries {
        for &spec in &specs {
            let mut rows: Vec<(Coord, Coord, PointId)> = Vec::new();
            if let (Some(data), Some(index)) = (partition.get(chrom), indexes.get(chrom)) {
                if let Some((relation, effective)) = compile_query(spec, chrom, *q, config.window)
                {
                    let ids = index.answer(data, relation, effective);
                    rows = ids
                        .into_iter()
                        .map(|id| {
                            let iv = data.get(id).expect("indexes report only stored ids");
                            (iv.start(), iv.end(), id)
                        })
                        .collect();
                    rows.sort_unstable();
                }
            }
            for (start, end, id) in rows {
                writeln!(
                    out,
                    "{chrom}\t{}\t{}\t{}\t{chrom}\t{start}\t{end}\t{id}",
                    q.start(),
                    q.end(),
                    spec.symbol()
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub struct VerifyConfig {
    pub data: Vec<PathBuf>,
    pub queries: Option<PathBuf>,
    pub grid: Option<Coord>,
    pub window: Option<Coord>,
    pub strict: bool,
}

/// `verify`: run every relation through all three structures and the oracle
/// and demand exact result-set agreement. In `--grid N` mode the data and
/// query sets are all valid intervals with coordinates in `[0, N)` (the
/// input files are not read). The non-intersecting relations run in their
/// windowed form so the interval tree can serve them too; the window length
/// defaults to the span of the data, which makes the windowed query
/// equivalent to the unbounded one for every anchor except `start == 0`
/// (where no before-window exists and all engines trivially agree on zero
/// results).
pub fn cmd_verify(config: &VerifyConfig) -> Result<()> {
    let fault = std::env::var(VERIFY_FAULT_ENV).is_ok_and(|v| !v.is_empty() && v != "0");
    if fault {
        eprintln!("warning: {VERIFY_FAULT_ENV} is set; injecting a result-set fault");
    }

    let (partition, queries) = if let Some(limit) = config.grid {
        if limit < 2 {
            bail!("--grid needs at least 2 to form one interval");
        }
        let mut data = Dataset::new();
        let mut queries = Vec::new();
        for s in 0..limit {
            for e in (s + 1)..=limit.saturating_sub(1) {
                data.push(s, e).expect("grid intervals are valid");
                queries.push(("grid".to_string(), QueryInterval::new(s, e).unwrap()));
            }
        }
        let mut partition = ChromosomePartition::new();
        partition.insert("grid".to_string(), data);
        (partition, queries)
    } else {
        let (partition, _) = ingest::ingest_files(&config.data, config.strict)?;
        let queries_path = config
            .queries
            .as_ref()
            .ok_or_else(|| anyhow!("verify needs --queries FILE or --grid N"))?;
        let (queries, _) = ingest::read_queries(queries_path, config.strict)?;
        (partition, queries)
    };

    // Window length for the `<`/`>` relations: explicit flag, or the span of
    // the data so the window covers every coordinate in use.
    let window = config.window.unwrap_or_else(|| {
        partition
            .values()
            .flat_map(|d| d.intervals().iter().map(|iv| iv.end()))
            .max()
            .unwrap_or(1)
    });

    let mut touched: Vec<&String> = queries.iter().map(|(chrom, _)| chrom).collect();
    touched.sort();
    touched.dedup();

    // Build all three structures per touched chromosome.
    let engines: Vec<(StructureKind, BTreeMap<String, ChromIndex>)> = StructureKind::ALL
        .iter()
        .map(|&kind| {
            (
                kind,
                build_touched_indexes(&partition, &touched, Structure::Index(kind)),
            )
        })
        .collect();

    let mut agreed_per_relation: BTreeMap<&'static str, u64> = BTreeMap::new();
    let mut compared = 0u64;
    for (chrom, q) in &queries {
        let Some(data) = partition.get(chrom) else {
            continue;
        };
        for &relation in &ALL_RELATIONS {
            let effective = match relation {
                AllenRelation::Before => match window_before(*q, window) {
                    Ok(pair) => Some(pair),
                    Err(WindowError::EmptyWindow) => None,
                    Err(e) => bail!("window for {chrom}:{}-{}: {e}", q.start(), q.end()),
                },
                AllenRelation::After => Some(window_after(*q, window).map_err(|e| {
                    anyhow!("window for {chrom}:{}-{}: {e}", q.start(), q.end())
                })?),
                other => Some((other, *q)),
            };
            let Some((effective_relation, effective_q)) = effective else {
                // No before-window exists for an anchor starting at 0; every
                // engine trivially reports nothing.
                *agreed_per_relation.entry(relation.symbol()).or_insert(0) += 1;
                continue;
            };
            let expected = oracle::scan(data, effective_relation, effective_q);
            for (kind, indexes) in &engines {
                let index = indexes.get(chrom).expect("touched chromosomes are built");
                let mut got = index.answer(data, effective_relation, effective_q);
                if fault && *kind == StructureKind::Rtfc {
                    got.pop();
                }
                if got != expected {
                    bail!(
                        "divergence at {chrom}:{}-{} relation {}: oracle reports {} ids, \
                         {} reports {}",
                        q.start(),
                        q.end(),
                        relation.symbol(),
                        expected.len(),
                        kind.name(),
                        got.len()
                    );
                }
                compared += 1;
            }
            *agreed_per_relation.entry(relation.symbol()).or_insert(0) += 1;
        }
    }

    let mut out = BufWriter::new(std::io::stdout().lock());
    for (symbol, count) in &agreed_per_relation {
        writeln!(out, "relation {symbol}: {count} queries agree")?;
    }
    writeln!(
        out,
        "verify: {compared} result sets agree across rtfc, 2d-rt, it, oracle"
    )?;
    out.flush()?;
    Ok(())
}

pub struct BenchConfig {
    pub data: Vec<PathBuf>,
    pub queries: Option<PathBuf>,
    pub synthetic: Option<usize>,
    pub query_count: usize,
    pub span: Coord,
    pub clustered: bool,
    pub clusters: u32,
    pub min_width: Coord,
    pub max_width: Coord,
    pub seed: u64,
    pub relations: Vec<String>,
    pub structures: Vec<String>,
    pub workers: usize,
    pub strict: bool,
    pub json: Option<PathBuf>,
    pub tsv: Option<PathBuf>,
}

/// `bench`: build the selected structures (warm-up discarded) and replay the
/// workload, printing the tabular report to stdout (or `--tsv PATH`) and the
/// JSON report to `--json PATH` when given. With `--data`, the largest
/// chromosome's intervals form the dataset and the query file is read as
/// bare intervals; with `--synthetic N`, both sides are generated.
pub fn cmd_bench(config: &BenchConfig) -> Result<()> {
    let structures: Vec<StructureKind> = if config.structures.is_empty() {
        StructureKind::ALL.to_vec()
    } else {
        config
            .structures
            .iter()
            .map(|s| StructureKind::from_str(s).map_err(|e| anyhow!(e)))
            .collect::<Result<_>>()?
    };
    let relations: Vec<AllenRelation> = if config.relations.is_empty() {
        allenquery_core::INTERSECTION_RELATIONS.to_vec()
    } else {
        config
            .relations
            .iter()
            .map(|s| AllenRelation::from_str(s).map_err(|e| anyhow!("{e}")))
            .collect::<Result<_>>()?
    };
    if config.workers == 0 {
        bail!("--parallel needs at least one worker");
    }

    let distribution = if config.clustered {
        StartDistribution::Clustered {
            clusters: config.clusters,
        }
    } else {
        StartDistribution::Uniform
    };
    let (data, source) = match (config.synthetic, config.data.is_empty()) {
        (Some(n), _) => {
            let data = synthesize(&SyntheticConfig {
                n,
                span: config.span,
                distribution,
                min_width: config.min_width,
                max_width: config.max_width,
                seed: config.seed,
            })?;
            (data, format!("synthetic(n={n}, seed={})", config.seed))
        }
        (None, false) => {
            let (partition, _) = ingest::ingest_files(&config.data, config.strict)?;
            let (chrom, data) = partition
                .into_iter()
                .max_by_key(|(name, d)| (d.len(), std::cmp::Reverse(name.clone())))
                .ok_or_else(|| anyhow!("no intervals in the data files"))?;
            eprintln!("bench: using largest chromosome {chrom} ({} intervals)", data.len());
            (data, format!("file({chrom})"))
        }
        (None, true) => bail!("bench needs --synthetic N or --data FILE"),
    };
    let queries: Vec<QueryInterval> = match &config.queries {
        Some(path) => ingest::read_queries(path, config.strict)?
            .0
            .into_iter()
            .map(|(_, q)| q)
            .collect(),
        None => synthesize_queries(&SyntheticConfig {
            n: config.query_count,
            span: config.span,
            distribution,
            min_width: config.min_width,
            max_width: config.max_width,
            seed: config.seed + 1,
        })?,
    };

    let report = run_bench(
        &data,
        &source,
        &queries,
        &relations,
        &structures,
        config.seed,
        config.workers,
    )?;

    let tsv = render_tsv(&report);
    match &config.tsv {
        Some(path) => std::fs::write(path, &tsv).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut out = BufWriter::new(std::io::stdout().lock());
            out.write_all(tsv.as_bytes())?;
            out.flush()?;
        }
    }
    if let Some(path) = &config.json {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

pub struct GenConfig {
    pub n: usize,
    pub span: Coord,
    pub clustered: bool,
    pub clusters: u32,
    pub min_width: Coord,
    pub max_width: Coord,
    pub seed: u64,
    pub chrom: String,
    pub output: Option<PathBuf>,
}

/// `gen`: emit a deterministic synthetic BED file.
pub fn cmd_gen(config: &GenConfig) -> Result<()> {
    let distribution = if config.clustered {
        StartDistribution::Clustered {
            clusters: config.clusters,
        }
    } else {
        StartDistribution::Uniform
    };
    let data = synthesize(&SyntheticConfig {
        n: config.n,
        span: config.span,
        distribution,
        min_width: config.min_width,
        max_width: config.max_width,
        seed: config.seed,
    })?;
    let mut out = open_output(&config.output)?;
    for iv in data.intervals() {
        writeln!(out, "{}\t{}\t{}", config.chrom, iv.start(), iv.end())?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(tokens: &[&str]) -> Vec<String> {
        tokens.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn relation_specs_parse_all_forms() {
        assert_eq!(
            RelationSpec::parse("o"),
            Ok(RelationSpec::Plain(AllenRelation::Overlaps))
        );
        assert_eq!(
            RelationSpec::parse("eq"),
            Ok(RelationSpec::Plain(AllenRelation::Equals))
        );
        assert_eq!(
            RelationSpec::parse("="),
            Ok(RelationSpec::Plain(AllenRelation::Equals))
        );
        for token in ["before", "<", "lt"] {
            assert_eq!(RelationSpec::parse(token), Ok(RelationSpec::WindowedBefore));
        }
        for token in ["after", ">", "gt"] {
            assert_eq!(RelationSpec::parse(token), Ok(RelationSpec::WindowedAfter));
        }
        assert_eq!(RelationSpec::parse("lt-all"), Ok(RelationSpec::RawBefore));
        assert_eq!(RelationSpec::parse("gt-all"), Ok(RelationSpec::RawAfter));
        assert!(RelationSpec::parse("bogus").is_err());
    }

    #[test]
    fn windowed_specs_require_window() {
        let err = parse_relation_specs(
            &strings(&["before"]),
            Structure::Index(StructureKind::Rtfc),
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("--window"), "{err}");
        assert!(parse_relation_specs(
            &strings(&["before"]),
            Structure::Index(StructureKind::Rtfc),
            Some(10),
        )
        .is_ok());
    }

    #[test]
    fn interval_tree_rejects_raw_one_sided() {
        let err = parse_relation_specs(
            &strings(&["lt-all"]),
            Structure::Index(StructureKind::IntervalTree),
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("cannot serve"), "{err}");
        assert!(parse_relation_specs(&strings(&["lt-all"]), Structure::Oracle, None).is_ok());
    }

    #[test]
    fn unknown_relations_are_rejected_before_work() {
        let err = parse_relation_specs(
            &strings(&["o", "nonsense"]),
            Structure::Index(StructureKind::Rtfc),
            None,
        )
        .unwrap_err();
        assert!(err.to_string().contains("nonsense"), "{err}");
    }

    #[test]
    fn zero_window_is_rejected() {
        let err = parse_relation_specs(
            &strings(&["before"]),
            Structure::Index(StructureKind::Rtfc),
            Some(0),
        )
        .unwrap_err();
        assert!(err.to_string().contains("positive"), "{err}");
    }
}
