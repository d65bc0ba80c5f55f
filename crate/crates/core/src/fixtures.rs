//! Small graphs used by tests, examples and the acceptance suite.

use crate::graph::{parse_edge_str, LabeledGraph};

pub const MOVIES_TSV: &str = include_str!("../fixtures/movies.tsv");
pub const CYCLIC_TSV: &str = include_str!("../fixtures/cyclic.tsv");

/// Five-node movie graph with six edges.
pub fn movies() -> LabeledGraph {
    parse_edge_str(MOVIES_TSV).expect("movies fixture parses")
}

/// Eleven-node graph with labels a..d and one four-node cycle (3, 4, 9, 10).
pub fn cyclic() -> LabeledGraph {
    parse_edge_str(CYCLIC_TSV).expect("cyclic fixture parses")
}
