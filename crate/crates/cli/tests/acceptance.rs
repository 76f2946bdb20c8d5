//! Acceptance suite: one test per criterion, each printing a single
//! `acceptance criterion N: PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Criteria:
//!  1. exhaustive small-grid oracle equivalence, coordinates in [0, 10);
//!  2. randomized oracle equivalence, seeds 1..=10, n in {10^2, 10^3, 10^4};
//!  3. the thirteen relations partition all pairs, 10^5 random pairs plus
//!     per-query oracle partitions of a dataset;
//!  4. FC-index vs a per-entry linear-scan oracle, 10^3 random pairs;
//!  5. exactly one y binary search per RTFC query across a randomized suite;
//!  6. counter scaling at n in {2^14, 2^16, 2^18, 2^20} under
//!     low-selectivity queries — additive growth for RTFC (O(log n + k)),
//!     quadratic-in-height growth for the basic tree (O(log^2 n + k));
//!  7. structural audits over randomized builds;
//!  8. build/query orderings at n = 10^6 (report-only; only cross-structure
//!     result agreement is asserted);
//!  9. CLI byte-level determinism, rtfc vs oracle and run vs run.
//!
//! The two memory-heavy criteria (6 and 8) serialize on a shared lock so
//! their peak working sets do not overlap.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::sync::Mutex;
use std::time::Instant;

use allenquery::bench::{run_bench, StructureKind};
use allenquery::ingest::{synthesize, synthesize_queries, StartDistribution, SyntheticConfig};
use allenquery_core::{
    audit_fc_invariants, build_fc_index, oracle, rewrite, AllenRelation, Coord, Dataset, Interval,
    IntervalTree, PointStore, QueryInterval, RangeTree2d, RtfcTree, ALL_RELATIONS,
    INTERSECTION_RELATIONS,
};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

static HEAVY: Mutex<()> = Mutex::new(());

fn conclude(name: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {name}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{name} failed: {detail}");
}

fn uniform_config(n: usize, span: Coord, max_width: Coord, seed: u64) -> SyntheticConfig {
    SyntheticConfig {
        n,
        span,
        distribution: StartDistribution::Uniform,
        min_width: 1,
        max_width,
        seed,
    }
}

/// All valid intervals with both coordinates below `limit`.
fn grid(limit: Coord) -> Vec<(Coord, Coord)> {
    let mut out = Vec::new();
    for s in 0..limit {
        for e in (s + 1)..limit {
            out.push((s, e));
        }
    }
    out
}

#[test]
fn criterion_1_exhaustive_small_grid_equivalence() {
    let started = Instant::now();
    let pairs = grid(10);
    let mut data = Dataset::new();
    for &(s, e) in &pairs {
        data.push(s, e).unwrap();
    }
    let store = PointStore::from_dataset(&data);
    let rtfc = RtfcTree::build(&store);
    let basic = RangeTree2d::build(&store);
    let it = IntervalTree::build(&store);

    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for &(s, e) in &pairs {
        let q = QueryInterval::new(s, e).unwrap();
        for &relation in &INTERSECTION_RELATIONS {
            let expected = oracle::scan(&data, relation, q);
            let rq = rewrite(relation, q);
            if rtfc.query(&store, rq).0 != expected {
                mismatches += 1;
            }
            if basic.query(&store, rq).0 != expected {
                mismatches += 1;
            }
            if it.query(&store, relation, q).unwrap().0 != expected {
                mismatches += 1;
            }
            checked += 3;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    conclude(
        "criterion 1 (exhaustive small-grid oracle equivalence)",
        mismatches == 0 && elapsed < 5.0,
        &format!(
            "{checked} result sets over {} intervals x 11 relations, {mismatches} mismatches, \
             {elapsed:.2}s (limit 5s)",
            pairs.len()
        ),
    );
}

#[test]
fn criterion_2_randomized_oracle_equivalence() {
    let started = Instant::now();
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for seed in 1..=10u64 {
        for &n in &[100usize, 1_000, 10_000] {
            let span = 4 * n as Coord;
            let data = synthesize(&uniform_config(n, span, 64, seed)).unwrap();
            let store = PointStore::from_dataset(&data);
            let rtfc = RtfcTree::build(&store);
            let basic = RangeTree2d::build(&store);
            let it = IntervalTree::build(&store);
            let queries =
                synthesize_queries(&uniform_config(200, span, 64, seed ^ 0xabcdef)).unwrap();
            for &q in &queries {
                for &relation in &INTERSECTION_RELATIONS {
                    let expected = oracle::scan(&data, relation, q);
                    let rq = rewrite(relation, q);
                    if rtfc.query(&store, rq).0 != expected {
                        mismatches += 1;
                    }
                    if basic.query(&store, rq).0 != expected {
                        mismatches += 1;
                    }
                    if it.query(&store, relation, q).unwrap().0 != expected {
                        mismatches += 1;
                    }
                    checked += 3;
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    conclude(
        "criterion 2 (randomized oracle equivalence)",
        mismatches == 0 && elapsed < 120.0,
        &format!(
            "seeds 1..=10, n in {{100, 1000, 10000}}, 200 queries x 11 relations each: \
             {checked} result sets, {mismatches} mismatches, {elapsed:.1}s (limit 120s)"
        ),
    );
}

/// The thirteen definitions, independently transcribed (deliberately not
/// calling `classify` or `rewrite`), used to arbitrate criterion 3.
fn holds(rel: AllenRelation, a: (Coord, Coord), q: (Coord, Coord)) -> bool {
    let (x, y) = a;
    let (xq, yq) = q;
    match rel {
        AllenRelation::Overlaps => x < xq && xq < y && y < yq,
        AllenRelation::OverlappedBy => xq < x && x < yq && yq < y,
        AllenRelation::During => xq < x && x < y && y < yq,
        AllenRelation::Contains => x < xq && xq < yq && yq < y,
        AllenRelation::Meets => x < y && y == xq && xq < yq,
        AllenRelation::MetBy => xq < yq && yq == x && x < y,
        AllenRelation::Starts => x == xq && y < yq,
        AllenRelation::StartedBy => x == xq && yq < y,
        AllenRelation::Finishes => xq < x && y == yq,
        AllenRelation::FinishedBy => x < xq && y == yq,
        AllenRelation::Before => y < xq,
        AllenRelation::After => x > yq,
        AllenRelation::Equals => x == xq && y == yq,
    }
}

#[test]
fn criterion_3_partition_property() {
    let mut violations = 0usize;

    // Part one: on 10^5 random pairs, exactly one of the thirteen
    // independent definitions holds, and classify names it.
    let mut rng = ChaCha8Rng::seed_from_u64(0x703);
    for _ in 0..100_000 {
        let a = {
            let s: Coord = rng.gen_range(0..256);
            (s, s + rng.gen_range(1..=64))
        };
        let q = {
            let s: Coord = rng.gen_range(0..256);
            (s, s + rng.gen_range(1..=64))
        };
        let holding: Vec<AllenRelation> = ALL_RELATIONS
            .iter()
            .copied()
            .filter(|&r| holds(r, a, q))
            .collect();
        let classified = AllenRelation::classify(
            Interval::new(a.0, a.1, 0).unwrap(),
            QueryInterval::new(q.0, q.1).unwrap(),
        );
        if holding.len() != 1 || holding[0] != classified {
            violations += 1;
        }
    }

    // Part two: for fixed queries, the per-relation oracle result sets are
    // pairwise disjoint and their union is the whole dataset.
    let data = synthesize(&uniform_config(2_000, 8_000, 64, 0x33)).unwrap();
    let queries = synthesize_queries(&uniform_config(50, 8_000, 64, 0x34)).unwrap();
    for &q in &queries {
        let mut seen = BTreeSet::new();
        let mut total = 0usize;
        for &relation in &ALL_RELATIONS {
            let ids = oracle::scan(&data, relation, q);
            total += ids.len();
            seen.extend(ids);
        }
        if total != data.len() || seen.len() != data.len() {
            violations += 1;
        }
    }

    conclude(
        "criterion 3 (thirteen relations partition all pairs)",
        violations == 0,
        &format!(
            "100000 random pairs against independent definitions plus 50 per-query dataset \
             partitions: {violations} violations"
        ),
    );
}

#[test]
fn criterion_4_fc_index_matches_linear_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xfc);
    let mut violations = 0usize;
    for _ in 0..1_000 {
        let len = rng.gen_range(0..400usize);
        let mut parent: Vec<u64> = (0..len).map(|_| rng.gen_range(0..300)).collect();
        parent.sort_unstable();
        let child: Vec<u64> = parent.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let fc = build_fc_index(&parent, &child, |&v| v);
        for (i, &p) in parent.iter().enumerate() {
            let expect = child
                .iter()
                .position(|&c| c >= p)
                .map(|j| j as i32)
                .unwrap_or(-1);
            if fc.indices()[i] != expect {
                violations += 1;
            }
        }
        if audit_fc_invariants(&parent, &child, fc.indices(), |&v| v).is_err() {
            violations += 1;
        }
    }
    conclude(
        "criterion 4 (FC-index vs linear-scan oracle)",
        violations == 0,
        &format!("1000 random sorted parent/child multiset pairs: {violations} violations"),
    );
}

#[test]
fn criterion_5_rtfc_single_search() {
    let mut total = 0u64;
    let mut violations = 0u64;
    for seed in 1..=10u64 {
        for &n in &[100usize, 1_000] {
            let span = 4 * n as Coord;
            let data = synthesize(&uniform_config(n, span, 64, seed)).unwrap();
            let store = PointStore::from_dataset(&data);
            let rtfc = RtfcTree::build(&store);
            let queries =
                synthesize_queries(&uniform_config(200, span, 64, seed ^ 0x5150)).unwrap();
            for &q in &queries {
                for &relation in &ALL_RELATIONS {
                    let (_, stats) = rtfc.query(&store, rewrite(relation, q));
                    total += 1;
                    if stats.y_binary_searches != 1 {
                        violations += 1;
                    }
                }
            }
        }
    }
    conclude(
        "criterion 5 (exactly one y binary search per RTFC query)",
        violations == 0,
        &format!("{total} queries across all 13 relations: {violations} violations"),
    );
}

#[test]
fn criterion_6_counter_scaling() {
    let _guard = HEAVY.lock().unwrap_or_else(|p| p.into_inner());

    // Low-selectivity workload: `d` queries of width 32 over a span of 8n,
    // kept only when the structure itself reports k <= 4 results.
    //
    // Slack constants:
    // - RTFC is O(log n + k): quadrupling n adds 2 levels; each level adds
    //   at most 2 nodes per x-path (two paths) plus 2 canonical-subtree
    //   roots, ~8 visits expected. RTFC_ADDITIVE_SLACK = 16.0 doubles that
    //   for distribution noise.
    // - The basic tree is O(log^2 n + k): the dominant term scales with
    //   height^2, so the mean ratio between consecutive sizes is bounded by
    //   (h2/h1)^2; lower-order terms pull the true ratio below the bound,
    //   and BASIC_RATIO_SLACK = 0.35 absorbs workload noise on top.
    const RTFC_ADDITIVE_SLACK: f64 = 16.0;
    const BASIC_RATIO_SLACK: f64 = 0.35;

    let mut rtfc_means = Vec::new();
    let mut basic_means = Vec::new();
    let mut heights = Vec::new();
    let mut mean_k = Vec::new();
    for exp in [14u32, 16, 18, 20] {
        let n = 1usize << exp;
        let span = 8 * n as Coord;
        let data = synthesize(&uniform_config(n, span, 16, 0x600 + exp as u64)).unwrap();
        let store = PointStore::from_dataset(&data);

        let mut rng = ChaCha8Rng::seed_from_u64(0x601 + exp as u64);
        let candidates: Vec<QueryInterval> = (0..1_500)
            .map(|_| {
                let s = rng.gen_range(0..span - 32);
                QueryInterval::new(s, s + 32).unwrap()
            })
            .collect();

        let rtfc = RtfcTree::build(&store);
        let mut kept = Vec::new();
        let mut rtfc_nodes = 0u64;
        let mut k_total = 0u64;
        for &q in &candidates {
            let (ids, stats) = rtfc.query(&store, rewrite(AllenRelation::During, q));
            if stats.results_reported <= 4 {
                kept.push(q);
                rtfc_nodes += stats.nodes_visited;
                k_total += ids.len() as u64;
                if kept.len() == 200 {
                    break;
                }
            }
        }
        assert!(
            kept.len() >= 50,
            "only {} low-selectivity queries at n=2^{exp}; workload needs retuning",
            kept.len()
        );
        rtfc_means.push(rtfc_nodes as f64 / kept.len() as f64);
        mean_k.push(k_total as f64 / kept.len() as f64);
        drop(rtfc);

        let basic = RangeTree2d::build(&store);
        heights.push(basic.height());
        let mut basic_nodes = 0u64;
        for &q in &kept {
            let (_, stats) = basic.query(&store, rewrite(AllenRelation::During, q));
            basic_nodes += stats.nodes_visited;
        }
        basic_means.push(basic_nodes as f64 / kept.len() as f64);
    }

    let mut pass = true;
    let mut detail = String::new();
    for i in 1..rtfc_means.len() {
        let delta = rtfc_means[i] - rtfc_means[i - 1];
        let ratio = basic_means[i] / basic_means[i - 1];
        let bound = (heights[i] * heights[i]) as f64 / (heights[i - 1] * heights[i - 1]) as f64
            + BASIC_RATIO_SLACK;
        if delta > RTFC_ADDITIVE_SLACK || ratio > bound {
            pass = false;
        }
        detail.push_str(&format!(
            "[4x step {i}: rtfc +{delta:.1} (limit {RTFC_ADDITIVE_SLACK}), 2d-rt x{ratio:.2} \
             (limit {bound:.2})] "
        ));
    }
    detail.push_str(&format!(
        "rtfc means {:?}, 2d-rt means {:?}, mean k {:?}",
        rtfc_means
            .iter()
            .map(|v| (v * 10.0).round() / 10.0)
            .collect::<Vec<_>>(),
        basic_means
            .iter()
            .map(|v| (v * 10.0).round() / 10.0)
            .collect::<Vec<_>>(),
        mean_k
            .iter()
            .map(|v| (v * 100.0).round() / 100.0)
            .collect::<Vec<_>>()
    ));
    conclude(
        "criterion 6 (counter scaling, n in {2^14..2^20})",
        pass,
        &detail,
    );
}

#[test]
fn criterion_7_structural_audits() {
    let mut violations = 0usize;
    let mut audited = 0usize;
    let mut check = |data: &Dataset| {
        let store = PointStore::from_dataset(data);
        if RtfcTree::build(&store).audit(&store).is_err() {
            violations += 1;
        }
        if RangeTree2d::build(&store).audit(&store).is_err() {
            violations += 1;
        }
        if IntervalTree::build(&store).audit(&store).is_err() {
            violations += 1;
        }
        audited += 3;
    };

    // Every size from 1 to 48 (all split parities near the small end), then
    // larger sizes with varied duplication and width profiles.
    for n in 1..=48usize {
        check(&synthesize(&uniform_config(n, (4 * n) as Coord, 8, n as u64)).unwrap());
    }
    for (n, span, width, seed) in [
        (997usize, 50u64, 4u64, 71u64), // duplicate-heavy
        (4_096, 1_000_000, 1, 72),      // sparse unit widths
        (10_000, 10_000, 500, 73),      // long overlapping intervals
        (65_536, 262_144, 64, 74),      // large power of two
        (99_999, 400_000, 32, 75),      // large odd size
    ] {
        check(
            &synthesize(&SyntheticConfig {
                n,
                span,
                distribution: StartDistribution::Uniform,
                min_width: 1,
                max_width: width,
                seed,
            })
            .unwrap(),
        );
    }
    // Clustered shape too.
    check(
        &synthesize(&SyntheticConfig {
            n: 20_000,
            span: 1_000_000,
            distribution: StartDistribution::Clustered { clusters: 7 },
            min_width: 1,
            max_width: 64,
            seed: 76,
        })
        .unwrap(),
    );

    conclude(
        "criterion 7 (structural audits)",
        violations == 0,
        &format!("{audited} structure audits across 54 randomized builds: {violations} failures"),
    );
}

#[test]
fn criterion_8_desk_scale_orderings_report_only() {
    let _guard = HEAVY.lock().unwrap_or_else(|p| p.into_inner());

    let n = 1_000_000usize;
    let span = 4 * n as Coord;
    let data = synthesize(&uniform_config(n, span, 64, 0x800)).unwrap();
    let queries = synthesize_queries(&uniform_config(10_000, span, 64, 0x801)).unwrap();

    let report = match run_bench(
        &data,
        "synthetic(n=10^6)",
        &queries,
        &INTERSECTION_RELATIONS,
        &StructureKind::ALL,
        0x800,
        1,
    ) {
        Ok(r) => r,
        Err(e) => {
            conclude(
                "criterion 8 (desk-scale orderings, report-only)",
                false,
                &format!("cross-structure result mismatch: {e}"),
            );
            return;
        }
    };

    let by_name = |name: &str| {
        report
            .structures
            .iter()
            .find(|s| s.structure == name)
            .expect("all three structures benched")
    };
    let (rtfc, basic, it) = (by_name("rtfc"), by_name("2d-rt"), by_name("it"));

    // Report-only observations: expected orderings from the full-scale
    // experiments, checked here for interest but never asserted — desk-scale
    // wall clock is hardware noise.
    let build_ordering = it.build_seconds < rtfc.build_seconds
        && rtfc.build_seconds < basic.build_seconds;
    println!(
        "  report-only: build seconds it={:.2} rtfc={:.2} 2d-rt={:.2}; expected it < rtfc < \
         2d-rt: {}",
        it.build_seconds, rtfc.build_seconds, basic.build_seconds,
        if build_ordering { "observed" } else { "not observed" }
    );
    let row = |s: &allenquery::bench::StructureReport, sym: &str| {
        s.relations
            .iter()
            .find(|r| r.relation == sym)
            .expect("relation row present")
            .total_seconds
    };
    let mut faster = 0usize;
    for r in &INTERSECTION_RELATIONS {
        if row(rtfc, r.symbol()) <= row(basic, r.symbol()) {
            faster += 1;
        }
    }
    println!(
        "  report-only: rtfc <= 2d-rt query time on {faster}/11 relations; expected 11/11"
    );
    for (fast, slow) in [("oi", "o"), ("mi", "m"), ("si", "fi")] {
        let (tf, ts) = (row(rtfc, fast), row(rtfc, slow));
        println!(
            "  report-only: rtfc {fast}={tf:.3}s vs {slow}={ts:.3}s; expected {fast} faster: {}",
            if tf <= ts { "observed" } else { "not observed" }
        );
    }

    // The asserted part: the bench ran to completion, which means every
    // (query, relation) result count agreed across all three structures.
    let total_results: u64 = rtfc.relations.iter().map(|r| r.total_results).sum();
    conclude(
        "criterion 8 (desk-scale orderings, report-only)",
        true,
        &format!(
            "n=10^6, 10^4 queries x 11 relations: result counts agree across rtfc/2d-rt/it \
             ({total_results} total results per structure); timings above are report-only"
        ),
    );
}

fn run_cli(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_allenquery"))
        .env_remove("ALLENQUERY_THREADS")
        .env_remove("ALLENQUERY_VERIFY_FAULT")
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.success(),
        String::from_utf8(out.stdout).expect("stdout is UTF-8"),
        String::from_utf8(out.stderr).expect("stderr is UTF-8"),
    )
}

fn gen_fixture(dir: &Path, name: &str, n: usize, seed: u64) -> String {
    let path = dir.join(name);
    let (ok, _, stderr) = run_cli(&[
        "gen",
        "--n",
        &n.to_string(),
        "--span",
        "100000",
        "--seed",
        &seed.to_string(),
        "--chrom",
        "chr1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(ok, "gen failed: {stderr}");
    path.to_str().unwrap().to_string()
}

#[test]
fn criterion_9_cli_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let data = gen_fixture(dir.path(), "data.bed", 2_000, 77);
    let queries = gen_fixture(dir.path(), "queries.bed", 200, 78);

    let run_query = |structure: &str| {
        let (ok, stdout, stderr) = run_cli(&[
            "query",
            "--data",
            &data,
            "--queries",
            &queries,
            "--rel",
            "o,oi,d,di,m,mi,s,si,f,fi,eq",
            "--structure",
            structure,
        ]);
        assert!(ok, "query --structure {structure} failed: {stderr}");
        stdout
    };

    let rtfc_a = run_query("rtfc");
    let rtfc_b = run_query("rtfc");
    let oracle_out = run_query("oracle");

    let pass = !rtfc_a.is_empty() && rtfc_a == rtfc_b && rtfc_a == oracle_out;
    conclude(
        "criterion 9 (CLI determinism, rtfc vs oracle)",
        pass,
        &format!(
            "{} TSV rows; rtfc repeated runs byte-identical: {}; rtfc vs oracle byte-identical: \
             {}",
            rtfc_a.lines().count(),
            rtfc_a == rtfc_b,
            rtfc_a == oracle_out
        ),
    );
}
