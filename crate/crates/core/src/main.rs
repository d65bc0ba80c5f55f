use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};

use bitpath::baselines::{run_query, Method};
use bitpath::graph::GraphStats;
use bitpath::harness::{
    assign_zipf_labels, gen_rmat, gen_worstcase, generate_queries, label_frequencies, label_frequency_csv,
    run_benchmark, PathStrategy, QueryGenConfig, WorstCaseVariant,
};
use bitpath::index::{read_index, write_index, MAGIC};
use bitpath::query::parse_queries;
use bitpath::{BitPathIndex, CollapsedGraph, Deadline, Error, LocrQuery};

#[derive(Parser)]
#[command(
    name = "bitpath",
    version,
    about = "Label-order-constrained reachability over compressed bit-vector indexes"
)]
struct Cli {
    /// Print progress and timings to stderr (repeat for more).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a tab-separated edge list.
    BuildIndex {
        graph: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Answer one inline query or a file of queries.
    Query(QueryArgs),
    /// Time a query set and write per-length statistics as CSV.
    Bench {
        /// Index file or edge list.
        input: PathBuf,
        queries: PathBuf,
        #[arg(long, default_value = "bitpath")]
        method: Method,
        /// Per-query timeout in seconds.
        #[arg(long, default_value_t = 10.0)]
        timeout: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate an R-MAT graph with Zipf-distributed labels.
    GenRmat {
        /// Node budget (a power of two).
        #[arg(long, default_value_t = 1 << 17)]
        nodes: u64,
        #[arg(long, default_value_t = 100_000)]
        edges: u64,
        #[arg(long, default_value_t = 64)]
        labels: usize,
        #[arg(long, default_value_t = bitpath::harness::rmat::DEFAULT_ZIPF_S)]
        zipf_s: f64,
        /// Quadrant probabilities a,b,c,d.
        #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = bitpath::harness::rmat::DEFAULT_QUADRANTS)]
        quadrants: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the label frequency table here.
        #[arg(long)]
        label_csv: Option<PathBuf>,
    },
    /// Generate positive and negative queries by backward path sampling.
    GenQueries {
        /// Index file or edge list.
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        positives: usize,
        #[arg(long, default_value_t = 100)]
        negatives: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Uniform)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = bitpath::harness::queries::DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value_t = bitpath::harness::queries::DEFAULT_KEEP_PROB)]
        keep_prob: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Generate a graph on which divide-and-conquer backtracks heavily.
    GenWorstcase {
        /// Candidate edges per label.
        #[arg(long, short)]
        e: usize,
        /// Query length (at least 3).
        #[arg(long, default_value_t = 4)]
        len: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::Fail)]
        variant: VariantArg,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the matching query line here.
        #[arg(long)]
        query_output: Option<PathBuf>,
    },
    /// Report index section sizes and compression.
    Stats {
        index: PathBuf,
        /// Write the label frequency table here.
        #[arg(long)]
        label_csv: Option<PathBuf>,
    },
}

#[derive(Args)]
struct QueryArgs {
    index: PathBuf,
    #[arg(long, requires = "dest", conflicts_with = "queries")]
    source: Option<String>,
    #[arg(long, requires = "source")]
    dest: Option<String>,
    /// Comma-separated labels; empty for plain reachability.
    #[arg(long, requires = "source", default_value = "")]
    labels: String,
    /// File with one query per line.
    #[arg(long, required_unless_present = "source")]
    queries: Option<PathBuf>,
    #[arg(long, default_value = "bitpath")]
    method: Method,
    /// Per-query timeout in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Uniform,
    Topo,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Fail,
    Sat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn timeout_of(secs: f64) -> Result<Duration, Error> {
    Duration::try_from_secs_f64(secs)
        .ok()
        .filter(|d| !d.is_zero())
        .ok_or_else(|| Error::InvalidParameter(format!("timeout {secs} must be a positive number of seconds")))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Loads an index file, or builds an index from an edge list.
fn open_index(path: &Path) -> Result<BitPathIndex, Error> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(MAGIC) {
        read_index(&bytes)
    } else {
        BitPathIndex::from_graph(&bitpath::parse_edge_list(bytes.as_slice())?)
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let verbose = cli.verbose;
    match cli.command {
        Command::BuildIndex { graph, output } => {
            let start = Instant::now();
            let g = bitpath::parse_edge_list(BufReader::new(File::open(&graph)?))?;
            let cg = CollapsedGraph::from_graph(&g)?;
            let stats = GraphStats::compute(&g, &cg);
            let idx = BitPathIndex::build(cg)?;
            let bytes = write_index(&idx);
            let build_ms = start.elapsed().as_millis();
            fs::write(&output, &bytes)?;
            println!("{stats} index_bytes={} build_ms={build_ms}", bytes.len());
        }
        Command::Query(args) => {
            let idx = open_index(&args.index)?;
            let queries = match (&args.source, &args.dest, &args.queries) {
                (Some(s), Some(d), _) => vec![LocrQuery {
                    source: s.clone(),
                    destination: d.clone(),
                    labels: args
                        .labels
                        .split(',')
                        .filter(|l| !l.is_empty())
                        .map(str::to_owned)
                        .collect(),
                }],
                (_, _, Some(file)) => parse_queries(BufReader::new(File::open(file)?))?,
                _ => unreachable!("clap enforces a source or a query file"),
            };
            let timeout = args.timeout.map(timeout_of).transpose()?;
            let mut out = io::stdout().lock();
            for q in &queries {
                let deadline = timeout.map_or_else(Deadline::none, Deadline::after);
                match run_query(args.method, &idx, q, deadline) {
                    Ok(r) => writeln!(out, "{}", r.to_line())?,
                    Err(Error::Timeout) => writeln!(out, "TIMEOUT")?,
                    Err(e) => return Err(e),
                }
            }
        }
        Command::Bench {
            input,
            queries,
            method,
            timeout,
            output,
        } => {
            let idx = open_index(&input)?;
            let qs = bitpath::query::parse_query_set(BufReader::new(File::open(&queries)?))?;
            let report = run_benchmark(method, &idx, &qs, Some(timeout_of(timeout)?))?;
            if verbose > 0 {
                eprintln!(
                    "{} queries, {} timeouts, mean {:.0} ns",
                    report.total_count(),
                    report.total_timeouts(),
                    report.overall_mean_ns().unwrap_or(0.0)
                );
            }
            emit(output.as_deref(), &report.to_csv())?;
        }
        Command::GenRmat {
            nodes,
            edges,
            labels,
            zipf_s,
            quadrants,
            seed,
            output,
            label_csv,
        } => {
            let q: [f64; 4] = quadrants
                .try_into()
                .map_err(|_| Error::InvalidParameter("expected four quadrant probabilities".into()))?;
            let g = assign_zipf_labels(&gen_rmat(nodes, edges, q, seed)?, labels, zipf_s, seed)?;
            if let Some(p) = label_csv {
                fs::write(p, label_frequency_csv(&label_frequencies(&g)))?;
            }
            emit(output.as_deref(), &g.to_tsv())?;
        }
        Command::GenQueries {
            input,
            positives,
            negatives,
            strategy,
            max_len,
            keep_prob,
            seed,
            output,
        } => {
            let idx = open_index(&input)?;
            let cfg = QueryGenConfig {
                positives,
                negatives,
                strategy: match strategy {
                    StrategyArg::Uniform => PathStrategy::Uniform,
                    StrategyArg::Topo => PathStrategy::TopoWeighted,
                },
                max_len,
                keep_prob,
                seed,
            };
            let qs = generate_queries(&idx, &cfg)?;
            if verbose > 0 {
                eprintln!(
                    "{} positive, {} negative",
                    qs.count(bitpath::Polarity::Positive),
                    qs.count(bitpath::Polarity::Negative)
                );
            }
            emit(output.as_deref(), &qs.to_tsv())?;
        }
        Command::GenWorstcase {
            e,
            len,
            variant,
            output,
            query_output,
        } => {
            let variant = match variant {
                VariantArg::Fail => WorstCaseVariant::Fail,
                VariantArg::Sat => WorstCaseVariant::Satisfiable,
            };
            let wc = gen_worstcase(e, len, variant)?;
            let line = format!("{}\n", wc.query().to_line());
            match query_output {
                Some(p) => fs::write(p, line)?,
                None => eprint!("{line}"),
            }
            emit(output.as_deref(), &wc.graph.to_tsv())?;
        }
        Command::Stats { index, label_csv } => {
            let bytes = fs::read(&index)?;
            let idx = read_index(&bytes)?;
            let s = idx.section_sizes();
            let (succ, pred) = idx.node_vector_bytes();
            let compressed = (succ + pred) as u64;
            let plain = idx.plain_node_vector_bytes();
            let ints = idx.int_array_node_vector_bytes();
            let ratio = if compressed == 0 {
                0.0
            } else {
                plain as f64 / compressed as f64
            };
            let mut out = io::stdout().lock();
            writeln!(
                out,
                "nodes={} labels={} scc_map={} edges={} successors={} predecessors={} label_edges={} total={}",
                s.nodes, s.labels, s.scc_map, s.edges, s.successors, s.predecessors, s.label_edges, s.total
            )?;
            writeln!(
                out,
                "node_vectors={compressed} plain_bitmap={plain} int_array={ints} compression_ratio={ratio:.2}"
            )?;
            if let Some(p) = label_csv {
                let mut g = bitpath::LabeledGraph::new();
                let cg = idx.graph();
                g.nodes = cg.base.nodes.clone();
                g.labels = cg.labels().clone();
                for e in cg.edges() {
                    g.add_edge_ids(e.tail, e.head, e.label);
                }
                fs::write(p, label_frequency_csv(&label_frequencies(&g)))?;
            }
        }
    }
    Ok(())
}
