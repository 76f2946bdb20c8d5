//! BED ingestion, per-chromosome partitioning, and synthetic data generation.
//!
//! Input is the tab-separated BED layout: at least three columns
//! (`chrom`, `chromStart`, `chromEnd`), 0-based half-open coordinates,
//! further columns ignored. Lines beginning with `#`, `track`, or `browser`
//! — and blank lines — are skipped as headers/comments. A trailing `\r` is
//! tolerated on input; all output uses LF endings.
//!
//! Validation enforces `chromStart < chromEnd`. Records with
//! `chromStart == chromEnd` are counted as *degenerate*; records that fail to
//! parse (too few columns, non-numeric or negative coordinates,
//! `chromStart > chromEnd`) are counted as *malformed*. Both classes are
//! skipped by default and abort with a line number under strict mode.
//!
//! Chromosome names are grouped by exact string equality: **no
//! normalization** is performed, so `chr1` and `1` are distinct partitions.
//! Reconciling naming schemes belongs to the caller's pipeline.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use allenquery_core::{Coord, Dataset, QueryInterval};
use serde::Serialize;
use thiserror::Error;

/// One validated BED data line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BedRecord {
    pub chrom: String,
    pub start: Coord,
    pub end: Coord,
}

/// Per-parse accounting. The counters are conserved:
/// `parsed + degenerate + malformed + ignored == total`.
///
/// Serializes to JSON with exactly these key names.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    /// Every line read from the input.
    pub total: u64,
    /// Valid records yielded to the caller.
    pub parsed: u64,
    /// Records with `chromStart == chromEnd`, skipped.
    pub degenerate: u64,
    /// Records that failed validation outright, skipped.
    pub malformed: u64,
    /// Comment, header, and blank lines.
    pub ignored: u64,
}

impl IngestReport {
    /// Fold another report into this one (multi-file ingestion).
    pub fn absorb(&mut self, other: IngestReport) {
        self.total += other.total;
        self.parsed += other.parsed;
        self.degenerate += other.degenerate;
        self.malformed += other.malformed;
        self.ignored += other.ignored;
    }
}

#[derive(Debug, Error)]
pub enum IngestError {
    /// Strict mode: the first invalid record aborts the parse.
    #[error("{}line {line}: {reason}", match file { Some(f) => format!("{f}: "), None => String::new() })]
    Strict {
        file: Option<String>,
        line: u64,
        reason: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Map from chromosome name to its interval set. `BTreeMap` keeps iteration
/// (and therefore all derived output) deterministic.
pub type ChromosomePartition = BTreeMap<String, Dataset>;

fn classify_line(line: &str) -> Option<Result<BedRecord, String>> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if line.trim().is_empty()
        || line.starts_with('#')
        || line.starts_with("track")
        || line.starts_with("browser")
    {
        return None;
    }
    let mut fields = line.split('\t');
    let (chrom, start, end) = match (fields.next(), fields.next(), fields.next()) {
        (Some(c), Some(s), Some(e)) => (c, s, e),
        _ => return Some(Err("fewer than 3 tab-separated columns".into())),
    };
    let start: Coord = match start.parse() {
        Ok(v) => v,
        Err(_) => return Some(Err(format!("chromStart {start:?} is not a non-negative integer"))),
    };
    let end: Coord = match end.parse() {
        Ok(v) => v,
        Err(_) => return Some(Err(format!("chromEnd {end:?} is not a non-negative integer"))),
    };
    if start > end {
        return Some(Err(format!("chromStart {start} exceeds chromEnd {end}")));
    }
    Some(Ok(BedRecord {
        chrom: chrom.to_string(),
        start,
        end,
    }))
}

/// Parse a BED stream into records plus an accounting report.
///
/// Under `strict`, the first degenerate or malformed record aborts with its
/// 1-based line number and reason instead of being counted and skipped.
pub fn parse_bed<R: BufRead>(
    reader: R,
    strict: bool,
) -> Result<(Vec<BedRecord>, IngestReport), IngestError> {
    let mut records = Vec::new();
    let mut report = IngestReport::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| IngestError::Io {
            path: "<stream>".into(),
            source,
        })?;
        let lineno = idx as u64 + 1;
        report.total += 1;
        match classify_line(&line) {
            None => report.ignored += 1,
            Some(Ok(rec)) if rec.start == rec.end => {
                if strict {
                    return Err(IngestError::Strict {
                        file: None,
                        line: lineno,
                        reason: format!("degenerate interval (chromStart == chromEnd == {})", rec.start),
                    });
                }
                report.degenerate += 1;
            }
            Some(Ok(rec)) => {
                report.parsed += 1;
                records.push(rec);
            }
            Some(Err(reason)) => {
                if strict {
                    return Err(IngestError::Strict {
                        file: None,
                        line: lineno,
                        reason,
                    });
                }
                report.malformed += 1;
            }
        }
    }
    Ok((records, report))
}

/// Group records by exact chromosome string; within each chromosome, ids are
/// dense ordinals in encounter order.
pub fn partition(records: &[BedRecord]) -> ChromosomePartition {
    let mut out = ChromosomePartition::new();
    for rec in records {
        let data = out.entry(rec.chrom.clone()).or_default();
        data.push(rec.start, rec.end)
            .expect("parse_bed only yields records with start < end");
    }
    out
}

/// View records as queries, preserving input order.
pub fn to_queries(records: &[BedRecord]) -> Vec<(String, QueryInterval)> {
    records
        .iter()
        .map(|r| {
            let q = QueryInterval::new(r.start, r.end)
                .expect("parse_bed only yields records with start < end");
            (r.chrom.clone(), q)
        })
        .collect()
}

/// Ingest one or more BED files into a merged partition. Files are processed
/// in sorted-path order so the merged id assignment is deterministic
/// regardless of the order paths were supplied in.
pub fn ingest_files(
    paths: &[PathBuf],
    strict: bool,
) -> Result<(ChromosomePartition, IngestReport), IngestError> {
    let mut sorted: Vec<&PathBuf> = paths.iter().collect();
    sorted.sort();
    let mut all = Vec::new();
    let mut report = IngestReport::default();
    for path in sorted {
        let display = path.display().to_string();
        let file = File::open(path).map_err(|source| IngestError::Io {
            path: display.clone(),
            source,
        })?;
        let (mut records, one) = parse_bed(BufReader::new(file), strict).map_err(|e| match e {
            IngestError::Strict { line, reason, .. } => IngestError::Strict {
                file: Some(display.clone()),
                line,
                reason,
            },
            IngestError::Io { source, .. } => IngestError::Io {
                path: display.clone(),
                source,
            },
        })?;
        all.append(&mut records);
        report.absorb(one);
    }
    Ok((partition(&all), report))
}

/// Read a query file (same BED layout; extra columns ignored).
pub fn read_queries(
    path: &Path,
    strict: bool,
) -> Result<(Vec<(String, QueryInterval)>, IngestReport), IngestError> {
    let display = path.display().to_string();
    let file = File::open(path).map_err(|source| IngestError::Io {
        path: display.clone(),
        source,
    })?;
    let (records, report) = parse_bed(BufReader::new(file), strict).map_err(|e| match e {
        IngestError::Strict { line, reason, .. } => IngestError::Strict {
            file: Some(display.clone()),
            line,
            reason,
        },
        IngestError::Io { source, .. } => IngestError::Io {
            path: display,
            source,
        },
    })?;
    Ok((to_queries(&records), report))
}

/// Serialize a partition back to BED: chromosomes in map order, intervals in
/// id order, three tab-separated columns, LF endings. Re-ingesting the output
/// reproduces the partition exactly.
pub fn write_bed<W: Write>(mut w: W, partition: &ChromosomePartition) -> std::io::Result<()> {
    for (chrom, data) in partition {
        for iv in data.intervals() {
            writeln!(w, "{chrom}\t{}\t{}", iv.start(), iv.end())?;
        }
    }
    Ok(())
}

/// How synthetic interval starts are placed over the span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartDistribution {
    /// Uniform over `[0, span)`.
    Uniform,
    /// Concentrated around `clusters` uniformly placed centers, each with a
    /// half-width of `span / (8 * clusters)` — mimics the peaky layout of
    /// ChIP-seq annotation tracks.
    Clustered { clusters: u32 },
}

/// Parameters for the synthetic generator.
#[derive(Debug, Clone, Copy)]
pub struct SyntheticConfig {
    pub n: usize,
    /// Starts are drawn from `[0, span)`; ends may extend past it by a width.
    pub span: Coord,
    pub distribution: StartDistribution,
    /// Widths are drawn uniformly from `[min_width, max_width]`.
    pub min_width: Coord,
    pub max_width: Coord,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SyntheticError {
    #[error("span must be positive")]
    EmptySpan,
    #[error("widths must satisfy 1 <= min_width <= max_width (got {min}..={max})")]
    BadWidths { min: Coord, max: Coord },
    #[error("clustered distribution needs at least one cluster")]
    NoClusters,
}

/// Generate a deterministic synthetic dataset. The same config always yields
/// the same intervals, byte for byte.
pub fn synthesize(config: &SyntheticConfig) -> Result<Dataset, SyntheticError> {
    use rand::Rng;
    use rand_chacha::rand_core::SeedableRng;

    if config.span == 0 {
        return Err(SyntheticError::EmptySpan);
    }
    if config.min_width == 0 || config.min_width > config.max_width {
        return Err(SyntheticError::BadWidths {
            min: config.min_width,
            max: config.max_width,
        });
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(config.seed);
    let mut data = Dataset::new();
    let centers: Vec<Coord> = match config.distribution {
        StartDistribution::Uniform => Vec::new(),
        StartDistribution::Clustered { clusters } => {
            if clusters == 0 {
                return Err(SyntheticError::NoClusters);
            }
            (0..clusters).map(|_| rng.gen_range(0..config.span)).collect()
        }
    };
    for _ in 0..config.n {
        let start = match config.distribution {
            StartDistribution::Uniform => rng.gen_range(0..config.span),
            StartDistribution::Clustered { clusters } => {
                let center = centers[rng.gen_range(0..clusters as usize)];
                let radius = (config.span / (8 * clusters as Coord)).max(1);
                let offset = rng.gen_range(0..=2 * radius);
                (center + offset).saturating_sub(radius).min(config.span - 1)
            }
        };
        let width = rng.gen_range(config.min_width..=config.max_width);
        data.push(start, start + width)
            .expect("positive width keeps start < end");
    }
    Ok(data)
}

/// Generate synthetic query intervals with the same machinery.
pub fn synthesize_queries(config: &SyntheticConfig) -> Result<Vec<QueryInterval>, SyntheticError> {
    let data = synthesize(config)?;
    Ok(data
        .intervals()
        .iter()
        .map(|iv| QueryInterval::new(iv.start(), iv.end()).expect("generator emits valid intervals"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> (Vec<BedRecord>, IngestReport) {
        parse_bed(text.as_bytes(), false).unwrap()
    }

    #[test]
    fn minimal_well_formed_line() {
        let (recs, report) = parse("chr1\t100\t200\tpeak1\n");
        assert_eq!(
            recs,
            vec![BedRecord {
                chrom: "chr1".into(),
                start: 100,
                end: 200
            }]
        );
        assert_eq!(report.parsed, 1);
        assert_eq!(report.total, 1);
    }

    #[test]
    fn degenerate_record_is_counted_and_skipped() {
        let (recs, report) = parse("chr1\t200\t200\n");
        assert!(recs.is_empty());
        assert_eq!(report.degenerate, 1);
        assert_eq!(report.parsed, 0);
    }

    #[test]
    fn headers_and_comments_are_ignored_not_errors() {
        let (recs, report) = parse("track name=peaks\nbrowser position chr1\n# comment\n\n");
        assert!(recs.is_empty());
        assert_eq!(report.ignored, 4);
        assert_eq!(report.malformed, 0);
    }

    #[test]
    fn malformed_lines_are_counted() {
        let cases = [
            "chr1\t100",            // too few columns
            "chr1\tabc\t200",       // non-numeric start
            "chr1\t100\t-5",        // negative end
            "chr1\t300\t200",       // start > end
            "chr1 100 200",         // space-separated, so a single column
        ];
        for case in cases {
            let (recs, report) = parse(case);
            assert!(recs.is_empty(), "{case:?} should not parse");
            assert_eq!(report.malformed, 1, "{case:?} should be malformed");
        }
    }

    #[test]
    fn conservation_of_line_counts() {
        let text = "# header\nchr1\t1\t2\nchr1\t5\t5\nbogus\nchr2\t10\t20\tname\t0\t+\n\n";
        let (recs, report) = parse(text);
        assert_eq!(recs.len(), 2);
        assert_eq!(report.total, 6);
        assert_eq!(
            report.parsed + report.degenerate + report.malformed + report.ignored,
            report.total
        );
        assert_eq!(report.ignored, 2);
        assert_eq!(report.malformed, 1);
        assert_eq!(report.degenerate, 1);
    }

    #[test]
    fn crlf_input_is_tolerated() {
        let (recs, report) = parse("chr1\t7\t9\r\n");
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].end, 9);
        assert_eq!(report.parsed, 1);
    }

    #[test]
    fn strict_mode_aborts_with_line_number() {
        let text = "chr1\t1\t2\n# fine\nchr1\t9\t9\n";
        let err = parse_bed(text.as_bytes(), true).unwrap_err();
        match err {
            IngestError::Strict { line, reason, .. } => {
                assert_eq!(line, 3);
                assert!(reason.contains("degenerate"), "{reason}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn report_serializes_with_fixed_keys() {
        let report = IngestReport {
            total: 5,
            parsed: 2,
            degenerate: 1,
            malformed: 1,
            ignored: 1,
        };
        let json = serde_json::to_string(&report).unwrap();
        assert_eq!(
            json,
            r#"{"total":5,"parsed":2,"degenerate":1,"malformed":1,"ignored":1}"#
        );
    }

    #[test]
    fn partition_groups_by_exact_name() {
        let (recs, _) = parse("chr1\t1\t2\nchrX\t5\t9\nchr1\t3\t4\n1\t7\t8\nchr1\t5\t6\nchrX\t1\t3\n");
        let part = partition(&recs);
        assert_eq!(part.len(), 3);
        assert_eq!(part["chr1"].len(), 3);
        assert_eq!(part["chrX"].len(), 2);
        // "chr1" and "1" are distinct partitions: no normalization.
        assert_eq!(part["1"].len(), 1);
        // ids follow encounter order within a chromosome.
        let chr1 = &part["chr1"];
        assert_eq!(
            (chr1.get(0).unwrap().start(), chr1.get(2).unwrap().start()),
            (1, 5)
        );
    }

    #[test]
    fn empty_input_yields_empty_partition() {
        let (recs, _) = parse("");
        assert!(partition(&recs).is_empty());
    }

    #[test]
    fn round_trip_preserves_partition() {
        let (recs, _) = parse("chrB\t10\t20\nchrA\t1\t2\nchrB\t5\t30\nchrA\t1\t2\n");
        let part = partition(&recs);
        let mut buf = Vec::new();
        write_bed(&mut buf, &part).unwrap();
        let (recs2, report2) = parse_bed(buf.as_slice(), true).unwrap();
        assert_eq!(report2.parsed, 4);
        assert_eq!(partition(&recs2), part);
    }

    #[test]
    fn synthesize_is_deterministic_and_in_bounds() {
        let config = SyntheticConfig {
            n: 500,
            span: 10_000,
            distribution: StartDistribution::Uniform,
            min_width: 1,
            max_width: 64,
            seed: 7,
        };
        let a = synthesize(&config).unwrap();
        let b = synthesize(&config).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 500);
        for iv in a.intervals() {
            assert!(iv.start() < 10_000);
            let width = iv.end() - iv.start();
            assert!((1..=64).contains(&width));
        }
        let c = synthesize(&SyntheticConfig { seed: 8, ..config }).unwrap();
        assert_ne!(a, c, "different seeds should very likely differ");
    }

    #[test]
    fn clustered_starts_bunch_up() {
        let config = SyntheticConfig {
            n: 2_000,
            span: 1_000_000,
            distribution: StartDistribution::Clustered { clusters: 4 },
            min_width: 1,
            max_width: 10,
            seed: 11,
        };
        let data = synthesize(&config).unwrap();
        // With 4 clusters of half-width span/32, all starts land in at most
        // 4 windows covering ≤ a quarter of the span. Verify the support is
        // far narrower than uniform placement would give.
        let mut starts: Vec<Coord> = data.intervals().iter().map(|iv| iv.start()).collect();
        starts.sort_unstable();
        let mut coverage = 0;
        let mut lo = starts[0];
        let mut hi = starts[0];
        for &s in &starts[1..] {
            if s > hi + 1_000 {
                coverage += hi - lo;
                lo = s;
            }
            hi = s.max(hi);
        }
        coverage += hi - lo;
        assert!(
            coverage <= config.span / 3,
            "clustered starts cover {coverage} of span {}",
            config.span
        );
        for iv in data.intervals() {
            assert!(iv.start() < config.span);
        }
    }

    #[test]
    fn synthesize_rejects_bad_configs() {
        let base = SyntheticConfig {
            n: 1,
            span: 100,
            distribution: StartDistribution::Uniform,
            min_width: 1,
            max_width: 2,
            seed: 0,
        };
        assert_eq!(
            synthesize(&SyntheticConfig { span: 0, ..base }).unwrap_err(),
            SyntheticError::EmptySpan
        );
        assert_eq!(
            synthesize(&SyntheticConfig { min_width: 0, ..base }).unwrap_err(),
            SyntheticError::BadWidths { min: 0, max: 2 }
        );
        assert_eq!(
            synthesize(&SyntheticConfig { min_width: 5, max_width: 2, ..base }).unwrap_err(),
            SyntheticError::BadWidths { min: 5, max: 2 }
        );
        assert_eq!(
            synthesize(&SyntheticConfig {
                distribution: StartDistribution::Clustered { clusters: 0 },
                ..base
            })
            .unwrap_err(),
            SyntheticError::NoClusters
        );
    }
}
