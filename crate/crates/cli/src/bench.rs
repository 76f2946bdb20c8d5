//! Benchmark harness: build-time and per-relation query-time/counter reports
//! over the three index structures, in the shape of the usual
//! structure-comparison tables (one row per relation, one column group per
//! structure).
//!
//! Timings are wall-clock, reported but never asserted — orderings at desk
//! scale are hardware-dependent. Correctness is asserted: every structure
//! must report the same result count for every (query, relation) pair, and a
//! mismatch is a hard error, not a benchmark artifact. Counter metrics are
//! deterministic for a fixed workload. Query timing includes full result
//! materialization (ids collected into a vector), not bare enumeration.
//!
//! Builds are timed after one discarded warm-up build. Replay runs
//! single-threaded by default; `workers > 1` splits the query list across
//! that many threads (queries are independent reads of immutable trees, and
//! the additive counters make the totals identical either way).

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::time::Instant;

use allenquery_core::{
    rewrite, AllenRelation, Coord, Dataset, IntervalTree, PointId, PointStore, QueryInterval,
    QueryStats, RangeTree2d, RtfcTree, INTERSECTION_RELATIONS,
};
use serde::Serialize;
use thiserror::Error;

/// The three index structures under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructureKind {
    Rtfc,
    RangeTree2d,
    IntervalTree,
}

impl StructureKind {
    pub const ALL: [StructureKind; 3] = [
        StructureKind::Rtfc,
        StructureKind::RangeTree2d,
        StructureKind::IntervalTree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::Rtfc => "rtfc",
            StructureKind::RangeTree2d => "2d-rt",
            StructureKind::IntervalTree => "it",
        }
    }
}

impl std::fmt::Display for StructureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StructureKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rtfc" => Ok(StructureKind::Rtfc),
            "2d-rt" => Ok(StructureKind::RangeTree2d),
            "it" => Ok(StructureKind::IntervalTree),
            other => Err(format!(
                "unknown structure {other:?} (expected rtfc, 2d-rt, or it)"
            )),
        }
    }
}

/// A built index of any of the three kinds, behind one query interface.
pub enum BuiltStructure {
    Rtfc(RtfcTree),
    Basic(RangeTree2d),
    It(IntervalTree),
}

impl BuiltStructure {
    pub fn build(kind: StructureKind, store: &PointStore) -> Self {
        match kind {
            StructureKind::Rtfc => BuiltStructure::Rtfc(RtfcTree::build(store)),
            StructureKind::RangeTree2d => BuiltStructure::Basic(RangeTree2d::build(store)),
            StructureKind::IntervalTree => BuiltStructure::It(IntervalTree::build(store)),
        }
    }

    /// Answer one relation query. The interval tree cannot serve the
    /// non-intersecting relations; callers validate up front, so hitting that
    /// combination here is a bug.
    pub fn query(
        &self,
        store: &PointStore,
        relation: AllenRelation,
        q: QueryInterval,
    ) -> (Vec<PointId>, QueryStats) {
        match self {
            BuiltStructure::Rtfc(t) => t.query(store, rewrite(relation, q)),
            BuiltStructure::Basic(t) => t.query(store, rewrite(relation, q)),
            BuiltStructure::It(t) => t
                .query(store, relation, q)
                .expect("interval-tree workloads are validated to intersection relations"),
        }
    }
}

/// One structure built for benchmarking, with its timed build.
pub struct Built {
    pub kind: StructureKind,
    pub structure: BuiltStructure,
    pub build_seconds: f64,
    /// Behavioral fingerprint: a hash over the structure's answers (results
    /// and counters) to a fixed set of probe queries. Identical data must
    /// produce identical fingerprints; used by determinism checks. Stable
    /// within a build of this crate, not across toolchain versions.
    pub fingerprint: u64,
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error(
        "result mismatch on relation {relation}, query #{query_index}: \
         {left_name} reported {left}, {right_name} reported {right} — \
         this is a correctness bug, not a benchmark artifact"
    )]
    Mismatch {
        relation: AllenRelation,
        query_index: usize,
        left_name: &'static str,
        left: u64,
        right_name: &'static str,
        right: u64,
    },
    #[error("structure {structure} cannot serve relation {relation}; use windowed queries")]
    Unsupported {
        structure: StructureKind,
        relation: AllenRelation,
    },
}

/// One row of the per-relation table.
#[derive(Debug, Clone, Serialize)]
pub struct RelationRow {
    pub relation: String,
    pub queries: u64,
    pub total_seconds: f64,
    pub total_results: u64,
    pub mean_nodes_visited: f64,
    pub mean_comparisons: f64,
}

/// Everything measured for one structure.
#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    pub structure: String,
    pub build_seconds: f64,
    pub fingerprint: String,
    pub relations: Vec<RelationRow>,
}

/// The full report: dataset descriptor, workload descriptor, per-structure
/// measurements. Serialized as JSON; see [`render_tsv`] for the tabular view.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub source: String,
    pub seed: u64,
    pub query_count: usize,
    pub workers: usize,
    pub structures: Vec<StructureReport>,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Hash the structure's behavior on 32 fixed probe queries spanning the
/// data's coordinate range.
fn fingerprint(structure: &BuiltStructure, store: &PointStore, data: &Dataset) -> u64 {
    let max_end: Coord = data.intervals().iter().map(|iv| iv.end()).max().unwrap_or(1);
    let mut h = DefaultHasher::new();
    data.len().hash(&mut h);
    for i in 0..32u64 {
        let start = splitmix64(i) % max_end;
        let width = splitmix64(i ^ 0xffff) % 64 + 1;
        let q = QueryInterval::new(start, start + width).expect("width is positive");
        let relation = INTERSECTION_RELATIONS[(i % 11) as usize];
        let (ids, stats) = structure.query(store, relation, q);
        ids.hash(&mut h);
        stats.nodes_visited.hash(&mut h);
        stats.comparisons.hash(&mut h);
        stats.results_reported.hash(&mut h);
    }
    h.finish()
}

/// Build each selected structure, discarding one warm-up build and timing the
/// second, and fingerprint the result.
pub fn run_build_bench(
    data: &Dataset,
    store: &PointStore,
    structures: &[StructureKind],
) -> Vec<Built> {
    structures
        .iter()
        .map(|&kind| {
            drop(BuiltStructure::build(kind, store));
            let started = Instant::now();
            let structure = BuiltStructure::build(kind, store);
            let build_seconds = started.elapsed().as_secs_f64();
            let fingerprint = fingerprint(&structure, store, data);
            Built {
                kind,
                structure,
                build_seconds,
                fingerprint,
            }
        })
        .collect()
}

/// Result-count vector plus counter totals for one (structure, relation)
/// replay.
struct Replay {
    counts: Vec<u64>,
    stats: QueryStats,
    seconds: f64,
}

fn replay(
    built: &BuiltStructure,
    store: &PointStore,
    relation: AllenRelation,
    queries: &[QueryInterval],
    workers: usize,
) -> Replay {
    let started = Instant::now();
    let (counts, stats) = if workers <= 1 || queries.len() < 2 {
        let mut counts = Vec::with_capacity(queries.len());
        let mut stats = QueryStats::default();
        for &q in queries {
            let (ids, one) = built.query(store, relation, q);
            counts.push(ids.len() as u64);
            stats += one;
        }
        (counts, stats)
    } else {
        let chunk = queries.len().div_ceil(workers);
        let mut results: Vec<(Vec<u64>, QueryStats)> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = queries
                .chunks(chunk)
                .map(|part| {
                    scope.spawn(move || {
                        let mut counts = Vec::with_capacity(part.len());
                        let mut stats = QueryStats::default();
                        for &q in part {
                            let (ids, one) = built.query(store, relation, q);
                            counts.push(ids.len() as u64);
                            stats += one;
                        }
                        (counts, stats)
                    })
                })
                .collect();
            for handle in handles {
                results.push(handle.join().expect("replay worker panicked"));
            }
        });
        let mut counts = Vec::with_capacity(queries.len());
        let mut stats = QueryStats::default();
        for (part_counts, part_stats) in results {
            counts.extend(part_counts);
            stats += part_stats;
        }
        (counts, stats)
    };
    Replay {
        counts,
        stats,
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// Replay the workload on every built structure and cross-check result
/// counts. Returns per-structure reports in the order of `built`.
pub fn run_query_bench(
    built: &[Built],
    store: &PointStore,
    queries: &[QueryInterval],
    relations: &[AllenRelation],
    workers: usize,
) -> Result<Vec<StructureReport>, BenchError> {
    for b in built {
        if matches!(b.kind, StructureKind::IntervalTree) {
            for &r in relations {
                if !r.intersects() {
                    return Err(BenchError::Unsupported {
                        structure: b.kind,
                        relation: r,
                    });
                }
            }
        }
    }

    let mut reports: Vec<StructureReport> = built
        .iter()
        .map(|b| StructureReport {
            structure: b.kind.name().to_string(),
            build_seconds: b.build_seconds,
            fingerprint: format!("{:016x}", b.fingerprint),
            relations: Vec::with_capacity(relations.len()),
        })
        .collect();

    for &relation in relations {
        let mut baseline: Option<(usize, Vec<u64>)> = None;
        for (si, b) in built.iter().enumerate() {
            let run = replay(&b.structure, store, relation, queries, workers);
            if let Some((base_idx, base_counts)) = &baseline {
                for (qi, (l, r)) in base_counts.iter().zip(run.counts.iter()).enumerate() {
                    if l != r {
                        return Err(BenchError::Mismatch {
                            relation,
                            query_index: qi,
                            left_name: built[*base_idx].kind.name(),
                            left: *l,
                            right_name: b.kind.name(),
                            right: *r,
                        });
                    }
                }
            }
            let queries_run = run.counts.len() as u64;
            let denom = if queries_run == 0 { 1.0 } else { queries_run as f64 };
            reports[si].relations.push(RelationRow {
                relation: relation.symbol().to_string(),
                queries: queries_run,
                total_seconds: run.seconds,
                total_results: run.stats.results_reported,
                mean_nodes_visited: run.stats.nodes_visited as f64 / denom,
                mean_comparisons: run.stats.comparisons as f64 / denom,
            });
            if baseline.is_none() {
                baseline = Some((si, run.counts));
            }
        }
    }
    Ok(reports)
}

/// Build + replay in one call, assembling the final report.
#[allow(clippy::too_many_arguments)]
pub fn run_bench(
    data: &Dataset,
    source: &str,
    queries: &[QueryInterval],
    relations: &[AllenRelation],
    structures: &[StructureKind],
    seed: u64,
    workers: usize,
) -> Result<BenchReport, BenchError> {
    let store = PointStore::from_dataset(data);
    let built = run_build_bench(data, &store, structures);
    let reports = run_query_bench(&built, &store, queries, relations, workers)?;
    Ok(BenchReport {
        n: data.len(),
        source: source.to_string(),
        seed,
        query_count: queries.len(),
        workers,
        structures: reports,
    })
}

/// Tabular view: comment header with the run descriptor and per-structure
/// build times, then one row per relation with a column group per structure.
pub fn render_tsv(report: &BenchReport) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    writeln!(
        out,
        "# n={} source={} seed={} queries={} workers={}",
        report.n, report.source, report.seed, report.query_count, report.workers
    )
    .unwrap();
    for s in &report.structures {
        writeln!(
            out,
            "# build\t{}\t{:.6}\tfingerprint={}",
            s.structure, s.build_seconds, s.fingerprint
        )
        .unwrap();
    }
    let mut header = vec!["relation".to_string(), "queries".into(), "results".into()];
    for s in &report.structures {
        header.push(format!("{}_seconds", s.structure));
        header.push(format!("{}_mean_nodes", s.structure));
        header.push(format!("{}_mean_comparisons", s.structure));
    }
    writeln!(out, "{}", header.join("\t")).unwrap();
    let row_count = report
        .structures
        .first()
        .map(|s| s.relations.len())
        .unwrap_or(0);
    for i in 0..row_count {
        let first = &report.structures[0].relations[i];
        let mut row = vec![
            first.relation.clone(),
            first.queries.to_string(),
            first.total_results.to_string(),
        ];
        for s in &report.structures {
            let r = &s.relations[i];
            row.push(format!("{:.6}", r.total_seconds));
            row.push(format!("{:.2}", r.mean_nodes_visited));
            row.push(format!("{:.2}", r.mean_comparisons));
        }
        writeln!(out, "{}", row.join("\t")).unwrap();
    }
    out
}
