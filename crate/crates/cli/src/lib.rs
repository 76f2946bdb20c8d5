//! Command-line companion to `allenquery-core`: BED ingestion, per-chromosome
//! index construction, query/verify/bench/gen subcommands, and the benchmark
//! harness. The core crate owns the index structures and relation algebra;
//! everything here is I/O, orchestration, and reporting.

pub mod app;
pub mod bench;
pub mod ingest;
