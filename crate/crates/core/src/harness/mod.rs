//! Synthetic graphs, query sets, exhaustive ground truth and benchmarking.

pub mod bench;
pub mod oracle;
pub mod queries;
pub mod rmat;
pub mod worstcase;

pub use bench::{run_benchmark, BenchReport, BenchRow};
pub use oracle::{brute_force_oracle, walk_oracle, ORACLE_EDGE_LIMIT};
pub use queries::{
    generate_queries, make_negative, make_positive, negative_candidate, sample_paths, PathStrategy, QueryGenConfig,
    SampledPath, Verifier,
};
pub use rmat::{assign_zipf_labels, gen_rmat, label_frequencies, label_frequency_csv};
pub use worstcase::{gen_worstcase, WorstCase, WorstCaseVariant};
