//! `allenquery`: refined Allen interval-relation queries over genomic
//! interval sets, answered by rewriting each relation as a 2-D range query
//! over (start, end) points.

use std::path::PathBuf;

use allenquery::app::{self, Structure};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "allenquery",
    version,
    about = "Allen interval-relation queries over genomic interval sets",
    long_about = "Answers queries like \"all intervals that overlap / lie within / meet the \
                  query interval\" for all thirteen Allen relations, over BED-format interval \
                  sets partitioned by chromosome. Each relation is rewritten as a 2-D range \
                  query on (start, end) points and served by a range tree with fractional \
                  cascading (rtfc, the default), a basic 2-D range tree (2d-rt), an augmented \
                  interval tree (it), or a linear-scan oracle (oracle)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Answer relation queries; one TSV row per (query, hit) pair
    Query(QueryArgs),
    /// Cross-check all structures against the oracle on the given workload
    Verify(VerifyArgs),
    /// Benchmark build and query performance across structures
    Bench(BenchArgs),
    /// Generate a synthetic BED file
    Gen(GenArgs),
}

#[derive(Args)]
struct QueryArgs {
    /// Data BED file(s); multiple files are merged in sorted-path order
    #[arg(long, required = true, num_args = 1..)]
    data: Vec<PathBuf>,
    /// Query BED file (3+ columns; extra columns ignored)
    #[arg(long)]
    queries: PathBuf,
    /// Relations: o oi d di m mi s si f fi eq/=, before/after (need
    /// --window), lt-all/gt-all; comma-separated or repeated
    #[arg(long = "rel", value_delimiter = ',', required = true)]
    rel: Vec<String>,
    /// Index structure: rtfc, 2d-rt, it, or oracle
    #[arg(long, default_value = "rtfc")]
    structure: String,
    /// Window length for before/after queries
    #[arg(long)]
    window: Option<u64>,
    /// Abort on the first malformed or degenerate input record
    #[arg(long)]
    strict: bool,
    /// Write TSV here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Data BED file(s)
    #[arg(long, num_args = 1..)]
    data: Vec<PathBuf>,
    /// Query BED file
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Exhaustive mode: use all intervals with coordinates in [0, N) as both
    /// data and queries (ignores --data/--queries)
    #[arg(long)]
    grid: Option<u64>,
    /// Window length for the </> relations (default: the data's span)
    #[arg(long)]
    window: Option<u64>,
    /// Abort on the first malformed or degenerate input record
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Data BED file(s); the largest chromosome is benchmarked
    #[arg(long, num_args = 1..)]
    data: Vec<PathBuf>,
    /// Query BED file (read as bare intervals)
    #[arg(long)]
    queries: Option<PathBuf>,
    /// Generate N synthetic data intervals instead of reading files
    #[arg(long)]
    synthetic: Option<usize>,
    /// Number of synthetic queries (when --queries is absent)
    #[arg(long, default_value_t = 1000)]
    query_count: usize,
    /// Coordinate span for synthetic generation
    #[arg(long, default_value_t = 1_000_000)]
    span: u64,
    /// Cluster synthetic starts instead of spreading them uniformly
    #[arg(long)]
    clustered: bool,
    /// Number of clusters for --clustered
    #[arg(long, default_value_t = 16)]
    clusters: u32,
    /// Minimum synthetic interval width
    #[arg(long, default_value_t = 1)]
    min_width: u64,
    /// Maximum synthetic interval width
    #[arg(long, default_value_t = 64)]
    max_width: u64,
    /// Seed for synthetic data (queries use seed+1); recorded in the report
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Relations to replay (default: the 11 intersection relations)
    #[arg(long = "relations", value_delimiter = ',')]
    relations: Vec<String>,
    /// Structures to benchmark (default: rtfc,2d-rt,it)
    #[arg(long = "structures", value_delimiter = ',')]
    structures: Vec<String>,
    /// Replay queries across this many worker threads
    #[arg(long = "parallel", default_value_t = 1)]
    workers: usize,
    /// Abort on the first malformed or degenerate input record
    #[arg(long)]
    strict: bool,
    /// Write the JSON report here
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the TSV report here instead of stdout
    #[arg(long)]
    tsv: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Number of intervals
    #[arg(long)]
    n: usize,
    /// Starts are drawn from [0, span)
    #[arg(long, default_value_t = 1_000_000)]
    span: u64,
    /// Cluster starts instead of spreading them uniformly
    #[arg(long)]
    clustered: bool,
    /// Number of clusters for --clustered
    #[arg(long, default_value_t = 16)]
    clusters: u32,
    /// Minimum interval width
    #[arg(long, default_value_t = 1)]
    min_width: u64,
    /// Maximum interval width
    #[arg(long, default_value_t = 64)]
    max_width: u64,
    /// RNG seed; the same seed always yields the same file
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Chromosome name for the first BED column
    #[arg(long, default_value = "chrS")]
    chrom: String,
    /// Write BED here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

fn run() -> anyhow::Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Query(args) => {
            let structure: Structure = args.structure.parse().map_err(anyhow::Error::msg)?;
            app::cmd_query(&app::QueryConfig {
                data: args.data,
                queries: args.queries,
                relations: args.rel,
                structure,
                window: args.window,
                strict: args.strict,
                output: args.output,
            })
        }
        Command::Verify(args) => {
            if args.grid.is_none() && args.data.is_empty() {
                anyhow::bail!("verify needs --data FILE... or --grid N");
            }
            app::cmd_verify(&app::VerifyConfig {
                data: args.data,
                queries: args.queries,
                grid: args.grid,
                window: args.window,
                strict: args.strict,
            })
        }
        Command::Bench(args) => app::cmd_bench(&app::BenchConfig {
            data: args.data,
            queries: args.queries,
            synthetic: args.synthetic,
            query_count: args.query_count,
            span: args.span,
            clustered: args.clustered,
            clusters: args.clusters,
            min_width: args.min_width,
            max_width: args.max_width,
            seed: args.seed,
            relations: args.relations,
            structures: args.structures,
            workers: args.workers,
            strict: args.strict,
            json: args.json,
            tsv: args.tsv,
        }),
        Command::Gen(args) => app::cmd_gen(&app::GenConfig {
            n: args.n,
            span: args.span,
            clustered: args.clustered,
            clusters: args.clusters,
            min_width: args.min_width,
            max_width: args.max_width,
            seed: args.seed,
            chrom: args.chrom,
            output: args.output,
        }),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
